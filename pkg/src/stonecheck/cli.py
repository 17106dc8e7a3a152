"""Command-line front end: ingest documents, run constructions, export reports.

Exit codes: 0 on success, 1 when a verification records a counterexample,
2 on usage or validation errors.  All outputs are deterministic -- sorted
keys, fixed orderings, zeroed timings -- so consecutive runs on the same
inputs are byte-identical.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import __version__
from .algebra import ultrafilters
from .documents import Document, document_digest, parse_document
from .duality import dual_space, phi_mask
from .errors import StonecheckError
from .extension import canonical_extension, is_compact, is_dense
from .harness import (
    VerificationReport,
    build_diagram,
    exhaustive_suite,
    full_hom_instance,
    report_jsonable,
)

SCHEMA_VERSION = 1


def report_json(report: VerificationReport, input_digest: str) -> str:
    payload = {
        "schema_version": SCHEMA_VERSION,
        "tool_version": __version__,
        "input_digest": input_digest,
        "instances": report_jsonable(report),
    }
    return json.dumps(payload, sort_keys=True, indent=2) + "\n"


def exit_code_for_report(report: VerificationReport) -> int:
    return 0 if report.all_passed else 1


def _load_document(path: str) -> tuple[Document, str]:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise StonecheckError(f"cannot read document: {exc}") from exc
    return parse_document(text), document_digest(text)


def _write_output(text: str, out: str | None) -> None:
    if out is None:
        sys.stdout.write(text)
        return
    try:
        Path(out).write_text(text, encoding="utf-8")
    except OSError as exc:
        raise StonecheckError(f"cannot write {out!r}: {exc}") from exc


def _hasse_dot(doc: Document, name: str) -> str:
    """Hasse diagram of the algebra with its ultrafilters annotated."""
    algebra = doc.algebra(name)
    labels = doc.labels[name]
    ufs = ultrafilters(algebra)
    n = algebra.size
    lines = [f'digraph "{name}" {{', "  rankdir=BT;", "  node [shape=box];"]
    for i in range(n):
        inside = ",".join(
            f"u{k}" for k in range(len(ufs)) if phi_mask(algebra, i) >> k & 1
        )
        lines.append(f'  e{i} [label="{labels[i]}" tooltip="in ultrafilters: {inside}"];')
    for i in range(n):
        for j in range(n):
            if i == j or not algebra.leq_of(i, j):
                continue
            # covering pairs only
            if any(
                algebra.leq_of(i, k) and algebra.leq_of(k, j) and k not in (i, j)
                for k in range(n)
            ):
                continue
            lines.append(f"  e{i} -> e{j};")
    lines.append("}")
    return "\n".join(lines) + "\n"


def _diagram_dot(doc: Document, hom_name: str) -> str:
    """The eight-node construction diagram for a named homomorphism."""
    hom = doc.hom(hom_name)
    src_name, dst_name = doc.hom_endpoints[hom_name]
    bundle = build_diagram(hom)
    n1 = len(ultrafilters(hom.source))
    n2 = len(ultrafilters(hom.target))

    def table_tip(table) -> str:
        return "; ".join(f"{i}->{v}" for i, v in enumerate(table))

    def points(n: int) -> str:
        return "1 point" if n == 1 else f"{n} points"

    src_labels, dst_labels = doc.labels[src_name], doc.labels[dst_name]
    hom_tip = "; ".join(
        f"{src_labels[i]}->{dst_labels[v]}" for i, v in enumerate(hom.table)
    )
    dd_tip = table_tip(bundle.double_dual)
    lines = [
        f'digraph "{hom_name}" {{',
        "  rankdir=LR;",
        "  node [shape=box];",
        f'  b1 [label="B1 = {src_name} ({hom.source.size} elements)"];',
        f'  uf1 [label="Uf(B1) ({points(n1)})"];',
        f'  beta1 [label="beta(Uf(B1)) ({points(n1)})"];',
        f'  pow1 [label="P(Uf(B1)) ({1 << n1} elements)"];',
        f'  b2 [label="B2 = {dst_name} ({hom.target.size} elements)"];',
        f'  uf2 [label="Uf(B2) ({points(n2)})"];',
        f'  beta2 [label="beta(Uf(B2)) ({points(n2)})"];',
        f'  pow2 [label="P(Uf(B2)) ({1 << n2} elements)"];',
        '  b1 -> uf1 [label="(.)_*" style=dashed];',
        '  uf1 -> beta1 [label="beta_1"];',
        '  beta1 -> pow1 [label="(.)^*" style=dashed];',
        '  b2 -> uf2 [label="(.)_*" style=dashed];',
        '  uf2 -> beta2 [label="beta_2"];',
        '  beta2 -> pow2 [label="(.)^*" style=dashed];',
        f'  b1 -> b2 [label="h" tooltip="{hom_tip}"];',
        f'  uf2 -> uf1 [label="h_*" tooltip="{table_tip(bundle.h_star.table)}"];',
        f'  beta2 -> beta1 [label="h_*^beta" tooltip="{table_tip(bundle.h_star_beta.table)}"];',
        f'  pow1 -> pow2 [label="(h_*^beta)^*" tooltip="{dd_tip}"];',
        "}",
    ]
    return "\n".join(lines) + "\n"


def _cmd_dual(args) -> int:
    doc, _ = _load_document(args.document)
    algebra = doc.algebra(args.name)
    labels = doc.labels[args.name]
    ufs = ultrafilters(algebra)
    space = dual_space(algebra)
    lines = [f"dual space of {args.name}", f"points: {space.size}"]
    for k, u in enumerate(ufs):
        lines.append(f"  u{k}: principal ultrafilter at atom {labels[u.atom]}")
    base = sorted({frozenset(s) for s in space.base}, key=lambda s: (len(s), sorted(s)))
    lines.append(f"base sets: {len(base)}")
    for s in base:
        inside = ",".join(f"u{k}" for k in sorted(s))
        lines.append("  {" + inside + "}")
    sys.stdout.write("\n".join(lines) + "\n")
    if args.dot:
        if args.out is None:
            raise StonecheckError("--dot requires --out PATH")
        _write_output(_hasse_dot(doc, args.name), args.out)
    return 0


def _cmd_canext(args) -> int:
    doc, _ = _load_document(args.document)
    algebra = doc.algebra(args.name)
    ext = canonical_extension(algebra)
    dense = is_dense(ext.completion)
    compact = is_compact(ext.completion)
    lines = [
        f"canonical extension of {args.name}",
        f"points: {len(ext.point_carrier)}",
        f"extension size: {ext.algebra.size}",
        f"dense: {'pass' if dense.passed else 'fail'}",
        f"compact: {'pass' if compact.passed else 'fail'}",
    ]
    sys.stdout.write("\n".join(lines) + "\n")
    return 0


def _cmd_verify(args) -> int:
    if args.all:
        if args.hom is not None:
            raise UsageError("--all cannot be combined with a named homomorphism")
        if args.max_atoms is None:
            raise UsageError("--all requires --max-atoms")
        if (args.seed is None) != (args.count is None):
            raise UsageError("--seed and --count must be given together")
        sample = None if args.seed is None else (args.seed, args.count)
        digest_text = (
            f"all:max_atoms={args.max_atoms}:seed={args.seed}:count={args.count}"
        )
        if args.document is not None:
            raise UsageError("--all does not take a document")
        report = exhaustive_suite(args.max_atoms, sample)
        digest = document_digest(digest_text)
    else:
        if args.document is None or args.hom is None:
            raise UsageError("verify needs a document and a homomorphism name, or --all")
        if args.max_atoms is not None or args.seed is not None or args.count is not None:
            raise UsageError("--max-atoms/--seed/--count only apply to --all")
        doc, digest = _load_document(args.document)
        hom = doc.hom(args.hom)
        report = VerificationReport([full_hom_instance(hom, name=args.hom)])
        report.sort()

    text = report_json(report, digest)
    if args.out is not None:
        _write_output(text, args.out)
    if args.json or args.out is None:
        sys.stdout.write(text)
    else:
        total = sum(len(i.checks) for i in report.instances)
        status = "all passed" if report.all_passed else "COUNTEREXAMPLE FOUND"
        sys.stdout.write(
            f"{len(report.instances)} instances, {total} checks: {status}\n"
        )
    return exit_code_for_report(report)


def _cmd_diagram(args) -> int:
    doc, _ = _load_document(args.document)
    _write_output(_diagram_dot(doc, args.hom), args.out)
    return 0


class UsageError(StonecheckError):
    pass


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="stonecheck",
        description=(
            "Finite Boolean algebras, their ultrafilter spaces and canonical "
            "extensions, with exhaustive verification of the extension laws."
        ),
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_dual = sub.add_parser("dual", help="print the dual ultrafilter space of an algebra")
    p_dual.add_argument("document")
    p_dual.add_argument("name")
    p_dual.add_argument("--dot", action="store_true", help="also write a Hasse-diagram DOT file")
    p_dual.add_argument("--out", default=None)
    p_dual.set_defaults(func=_cmd_dual)

    p_canext = sub.add_parser("canext", help="summarize the canonical extension of an algebra")
    p_canext.add_argument("document")
    p_canext.add_argument("name")
    p_canext.set_defaults(func=_cmd_canext)

    p_verify = sub.add_parser("verify", help="verify the extension laws and write a report")
    p_verify.add_argument("document", nargs="?", default=None)
    p_verify.add_argument("hom", nargs="?", default=None)
    p_verify.add_argument("--all", action="store_true")
    p_verify.add_argument("--max-atoms", type=int, default=None)
    p_verify.add_argument("--seed", type=int, default=None)
    p_verify.add_argument("--count", type=int, default=None)
    p_verify.add_argument("--out", default=None)
    p_verify.add_argument("--json", action="store_true", help="print the report JSON to stdout")
    p_verify.set_defaults(func=_cmd_verify)

    p_diagram = sub.add_parser("diagram", help="write the construction diagram as DOT")
    p_diagram.add_argument("document")
    p_diagram.add_argument("hom")
    p_diagram.add_argument("--out", default=None)
    p_diagram.set_defaults(func=_cmd_diagram)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 2
    except StonecheckError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
