"""JSON documents defining named algebras and homomorphisms.

Schema (top level ``{"algebras": [...], "homs": [...]}``):

* algebra entries -- ``{"name": N, "powerset": n}`` for the 2**n-element
  powerset algebra, ``{"name": N, "carrier": [labels], "leq": [[a, b], ...],
  "complement": [[a, b], ...]}`` for an abstract presentation, or
  ``{"name": N, "ref": M}`` aliasing an earlier entry.  The ``leq`` pairs of
  an abstract entry are closed reflexively and transitively before
  validation, so listing the covering pairs is enough; antisymmetry (no
  cycles) is still checked.
* hom entries -- ``{"name": N, "source": A, "target": B, "map": [[a, b],
  ...]}`` with one pair per source element, or ``{"name": N, "source": A,
  "target": B, "atom_map": [[p, q], ...]}`` where each pair sends a target
  atom p to a source atom q, both written as the labels of those atom
  elements (the dual description; it expands to the induced homomorphism
  table).

Powerset algebras label their elements as sorted atom-index sets, e.g.
"{}", "{0}", "{0,2}"; their atoms are thus "{0}", "{1}", ...
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field

from .algebra import (
    BoolHom,
    FinBoolAlg,
    hom_from_atom_function,
    powerset_algebra,
    validate_boolean_algebra,
    validate_hom,
)
from .errors import ParseError, StonecheckError, UnknownName, ValidationError


@dataclass
class Document:
    algebras: dict[str, FinBoolAlg] = field(default_factory=dict)
    labels: dict[str, tuple[str, ...]] = field(default_factory=dict)
    algebra_order: list[str] = field(default_factory=list)
    homs: dict[str, BoolHom] = field(default_factory=dict)
    hom_order: list[str] = field(default_factory=list)
    hom_endpoints: dict[str, tuple[str, str]] = field(default_factory=dict)
    raw: dict = field(default_factory=dict)

    def algebra(self, name: str) -> FinBoolAlg:
        if name not in self.algebras:
            raise UnknownName(f"algebra {name!r} is not defined")
        return self.algebras[name]

    def hom(self, name: str) -> BoolHom:
        if name not in self.homs:
            raise UnknownName(f"homomorphism {name!r} is not defined")
        return self.homs[name]


def powerset_labels(n: int) -> tuple[str, ...]:
    out = []
    for mask in range(1 << n):
        inside = ",".join(str(i) for i in range(n) if mask >> i & 1)
        out.append("{" + inside + "}")
    return tuple(out)


def _closed_relation(size: int, pairs: list[tuple[int, int]]) -> list[tuple[int, int]]:
    rows = [[False] * size for _ in range(size)]
    for i in range(size):
        rows[i][i] = True
    for i, j in pairs:
        rows[i][j] = True
    changed = True
    while changed:
        changed = False
        for i in range(size):
            for j in range(size):
                if not rows[i][j]:
                    continue
                for k in range(size):
                    if rows[j][k] and not rows[i][k]:
                        rows[i][k] = True
                        changed = True
    return [(i, j) for i in range(size) for j in range(size) if rows[i][j]]


def _parse_algebra(entry: dict, where: str, doc: Document) -> None:
    if not isinstance(entry, dict) or "name" not in entry:
        raise ParseError(f"{where}: algebra entry must be an object with a name")
    name = entry["name"]
    if not isinstance(name, str) or not name:
        raise ParseError(f"{where}: algebra name must be a nonempty string")
    if name in doc.algebras:
        raise ValidationError(f"{where}: duplicate algebra name {name!r}")

    if "ref" in entry:
        ref = entry["ref"]
        if ref not in doc.algebras:
            raise ValidationError(f"{where}: ref {ref!r} is not defined yet")
        doc.algebras[name] = doc.algebras[ref]
        doc.labels[name] = doc.labels[ref]
    elif "powerset" in entry:
        n = entry["powerset"]
        if not isinstance(n, int) or n < 0:
            raise ParseError(f"{where}: powerset must be a nonnegative integer")
        try:
            doc.algebras[name] = powerset_algebra(n)
        except StonecheckError as exc:
            raise ValidationError(f"{where}: {exc}") from exc
        doc.labels[name] = powerset_labels(n)
    elif "carrier" in entry:
        carrier = entry.get("carrier")
        if not isinstance(carrier, list) or not all(isinstance(x, str) for x in carrier):
            raise ParseError(f"{where}: carrier must be a list of labels")
        if len(set(carrier)) != len(carrier):
            raise ValidationError(f"{where}: carrier labels must be unique")
        index = {label: i for i, label in enumerate(carrier)}

        def resolve(pair, what):
            if (
                not isinstance(pair, list)
                or len(pair) != 2
                or pair[0] not in index
                or pair[1] not in index
            ):
                raise ParseError(f"{where}: bad {what} pair {pair!r}")
            return index[pair[0]], index[pair[1]]

        leq_pairs = [resolve(p, "leq") for p in entry.get("leq", [])]
        comp_pairs = [resolve(p, "complement") for p in entry.get("complement", [])]
        comp_table = [-1] * len(carrier)
        for i, j in comp_pairs:
            if comp_table[i] != -1:
                raise ValidationError(f"{where}: element {carrier[i]!r} has two complements")
            comp_table[i] = j
        if any(c == -1 for c in comp_table):
            missing = carrier[comp_table.index(-1)]
            raise ValidationError(f"{where}: element {missing!r} has no complement")
        try:
            doc.algebras[name] = validate_boolean_algebra(
                len(carrier), _closed_relation(len(carrier), leq_pairs), comp_table
            )
        except StonecheckError as exc:
            raise ValidationError(f"{where}: {exc}") from exc
        doc.labels[name] = tuple(carrier)
    else:
        raise ParseError(f"{where}: algebra needs 'powerset', 'carrier', or 'ref'")
    doc.algebra_order.append(name)


def _parse_hom(entry: dict, where: str, doc: Document) -> None:
    if not isinstance(entry, dict) or "name" not in entry:
        raise ParseError(f"{where}: hom entry must be an object with a name")
    name = entry["name"]
    if not isinstance(name, str) or not name:
        raise ParseError(f"{where}: hom name must be a nonempty string")
    if name in doc.homs:
        raise ValidationError(f"{where}: duplicate hom name {name!r}")
    for key in ("source", "target"):
        if entry.get(key) not in doc.algebras:
            raise ValidationError(f"{where}: {key} {entry.get(key)!r} is not defined")
    src_name, dst_name = entry["source"], entry["target"]
    src, dst = doc.algebras[src_name], doc.algebras[dst_name]
    src_labels, dst_labels = doc.labels[src_name], doc.labels[dst_name]

    if "map" in entry:
        pairs = entry["map"]
        if not isinstance(pairs, list):
            raise ParseError(f"{where}: map must be a list of label pairs")
        table = [-1] * src.size
        for pair in pairs:
            if not isinstance(pair, list) or len(pair) != 2:
                raise ParseError(f"{where}: bad map pair {pair!r}")
            a, b = pair
            if a not in src_labels or b not in dst_labels:
                raise ValidationError(f"{where}: unknown label in pair {pair!r}")
            i = src_labels.index(a)
            if table[i] != -1:
                raise ValidationError(f"{where}: element {a!r} mapped twice")
            table[i] = dst_labels.index(b)
        if any(v == -1 for v in table):
            missing = src_labels[table.index(-1)]
            raise ValidationError(f"{where}: element {missing!r} has no image")
        try:
            doc.homs[name] = validate_hom(table, src, dst)
        except StonecheckError as exc:
            raise ValidationError(f"{where}: {exc}") from exc
    elif "atom_map" in entry:
        pairs = entry["atom_map"]
        if not isinstance(pairs, list):
            raise ParseError(f"{where}: atom_map must be a list of label pairs")
        src_atom_labels = [src_labels[a] for a in src.atoms]
        dst_atom_labels = [dst_labels[a] for a in dst.atoms]
        g = [-1] * dst.atom_count
        for pair in pairs:
            if not isinstance(pair, list) or len(pair) != 2:
                raise ParseError(f"{where}: bad atom_map pair {pair!r}")
            p, q = pair
            if p not in dst_atom_labels or q not in src_atom_labels:
                raise ValidationError(f"{where}: unknown atom label in pair {pair!r}")
            qi = dst_atom_labels.index(p)
            if g[qi] != -1:
                raise ValidationError(f"{where}: target atom {p!r} mapped twice")
            g[qi] = src_atom_labels.index(q)
        if any(v == -1 for v in g):
            missing = dst_atom_labels[g.index(-1)]
            raise ValidationError(f"{where}: target atom {missing!r} has no image")
        try:
            doc.homs[name] = hom_from_atom_function(src, dst, g)
        except StonecheckError as exc:
            raise ValidationError(f"{where}: {exc}") from exc
    else:
        raise ParseError(f"{where}: hom needs 'map' or 'atom_map'")
    doc.hom_order.append(name)
    doc.hom_endpoints[name] = (src_name, dst_name)


def parse_document(text: str) -> Document:
    """Parse and validate a document; errors carry the entry they point at."""
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"not valid JSON: {exc}") from exc
    if not isinstance(data, dict):
        raise ParseError("top level must be an object")
    unknown = set(data) - {"algebras", "homs"}
    if unknown:
        raise ParseError(f"unknown top-level keys: {sorted(unknown)}")
    doc = Document(raw=data)
    for idx, entry in enumerate(data.get("algebras", [])):
        _parse_algebra(entry, f"algebras[{idx}]", doc)
    for idx, entry in enumerate(data.get("homs", [])):
        _parse_hom(entry, f"homs[{idx}]", doc)
    return doc


def render_document(doc: Document) -> str:
    """Canonical JSON for a parsed document (stable key order and spacing)."""
    algebras = []
    for name in doc.algebra_order:
        algebra = doc.algebras[name]
        labels = doc.labels[name]
        n = algebra.size
        entry = {
            "name": name,
            "carrier": list(labels),
            "leq": [
                [labels[i], labels[j]]
                for i in range(n)
                for j in range(n)
                if algebra.leq_of(i, j)
            ],
            "complement": [
                [labels[i], labels[algebra.complement_of(i)]] for i in range(n)
            ],
        }
        algebras.append(entry)
    homs = []
    for name in doc.hom_order:
        hom = doc.homs[name]
        src_name, dst_name = doc.hom_endpoints[name]
        homs.append(
            {
                "name": name,
                "source": src_name,
                "target": dst_name,
                "map": [
                    [doc.labels[src_name][i], doc.labels[dst_name][v]]
                    for i, v in enumerate(hom.table)
                ],
            }
        )
    return json.dumps({"algebras": algebras, "homs": homs}, sort_keys=True, indent=2) + "\n"


def document_digest(text: str) -> str:
    return hashlib.sha256(text.encode("utf-8")).hexdigest()
