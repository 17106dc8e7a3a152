"""Completions of finite lattices and the canonical extension of maps.

A completion pairs a complete lattice with a validated lattice embedding.
The density and compactness tests quantify over the extensional filter and
ideal enumerations, implementing the defining identities literally.  The
canonical extension of a Boolean algebra is built as the powerset of its
ultrafilter set with the Stone embedding, and the extension of a map is
computed by the filter-quantified join formula -- deliberately not by the
dual-map shortcut, which lives in the verification harness as the
independent path the formula is checked against.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cache
from typing import Sequence, Union

from .algebra import (
    BoolHom,
    FinBoolAlg,
    FinLattice,
    MonotoneMap,
    UltraFilter,
    all_filters,
    all_ideals,
    fin_lattice,
    fin_poset,
    powerset_algebra,
    ultrafilters,
)
from .duality import phi_mask
from .errors import BoundExceeded, DegenerateAlgebra, InvariantViolation, NotAnEmbedding

MAX_ISO_SEARCH = 16


@dataclass(frozen=True, eq=False)
class Completion:
    """A complete finite lattice together with an embedding of the base."""

    base: FinLattice
    complete: FinLattice
    embedding: tuple[int, ...]


@dataclass(frozen=True, eq=False)
class CanonicalExtension:
    """The powerset-of-ultrafilters completion, with its point carrier."""

    completion: Completion
    point_carrier: tuple[UltraFilter, ...]
    algebra: FinBoolAlg


@dataclass(frozen=True)
class DensityVerdict:
    passed: bool
    element: int | None = None
    side: str | None = None


@dataclass(frozen=True)
class CompactnessVerdict:
    passed: bool
    filter_members: frozenset[int] | None = None
    ideal_members: frozenset[int] | None = None


@dataclass(frozen=True)
class IsoVerdict:
    passed: bool
    table: tuple[int, ...] | None = None


def completion(base: FinLattice, complete: FinLattice, embedding: Sequence[int]) -> Completion:
    """Validate the embedding: injective order-embedding preserving meet and join.

    Completeness of the codomain is automatic for finite lattices; it is
    still asserted by scanning every subset when the carrier is small enough
    for that to be feasible.
    """
    e = tuple(int(x) for x in embedding)
    if len(e) != base.size or any(not 0 <= v < complete.size for v in e):
        raise ValueError("embedding must map the base carrier into the completion")
    if len(set(e)) != base.size:
        raise NotAnEmbedding("embedding is not injective", e)
    for a in range(base.size):
        for b in range(base.size):
            if base.leq_of(a, b) != complete.leq_of(e[a], e[b]):
                raise NotAnEmbedding("order not reflected", (a, b))
            if e[base.meet_of(a, b)] != complete.meet_of(e[a], e[b]):
                raise NotAnEmbedding("meet not preserved", (a, b))
            if e[base.join_of(a, b)] != complete.join_of(e[a], e[b]):
                raise NotAnEmbedding("join not preserved", (a, b))
    _assert_complete(complete)
    return Completion(base, complete, e)


def _assert_complete(lattice: FinLattice) -> None:
    # Subset scan only where 2**size is affordable; beyond that finite
    # totality of the binary tables is what guarantees completeness.
    n = lattice.size
    if n > MAX_ISO_SEARCH:
        return
    leq = lattice.poset.leq
    for bits in range(1 << n):
        members = [i for i in range(n) if bits >> i & 1]
        m = lattice.meet_all(members)
        j = lattice.join_all(members)
        if any(not leq[m][x] for x in members) or any(not leq[x][j] for x in members):
            raise InvariantViolation("finite lattice lost a bound", bits)


def is_dense(c: Completion) -> DensityVerdict:
    """Check both density identities for every element of the completion.

    Each element must be the join of the meets of embedded filters below it
    and the meet of the joins of embedded ideals above it; the verdict names
    the first failing element and which side failed.
    """
    C = c.complete
    e = c.embedding
    filter_meets = [C.meet_all(e[a] for a in F.members) for F in all_filters(c.base)]
    ideal_joins = [C.join_all(e[a] for a in I.members) for I in all_ideals(c.base)]
    for x in range(C.size):
        join_side = C.join_all(m for m in filter_meets if C.leq_of(m, x))
        if join_side != x:
            return DensityVerdict(False, x, "join")
        meet_side = C.meet_all(j for j in ideal_joins if C.leq_of(x, j))
        if meet_side != x:
            return DensityVerdict(False, x, "meet")
    return DensityVerdict(True)


def is_compact(c: Completion) -> CompactnessVerdict:
    """Whenever an embedded filter meet lies below an embedded ideal join,
    the filter and ideal must intersect."""
    C = c.complete
    e = c.embedding
    filters = all_filters(c.base)
    ideals = all_ideals(c.base)
    filter_meets = [C.meet_all(e[a] for a in F.members) for F in filters]
    ideal_joins = [C.join_all(e[a] for a in I.members) for I in ideals]
    for F, fm in zip(filters, filter_meets):
        for I, ij in zip(ideals, ideal_joins):
            if C.leq_of(fm, ij) and not F.members & I.members:
                return CompactnessVerdict(False, F.members, I.members)
    return CompactnessVerdict(True)


@cache
def canonical_extension(algebra: FinBoolAlg) -> CanonicalExtension:
    """The powerset of the ultrafilter set with the Stone embedding.

    Density and compactness are asserted before returning; a failure would
    be a library bug.
    """
    ufs = ultrafilters(algebra)
    pow_alg = powerset_algebra(len(ufs))
    emb = tuple(phi_mask(algebra, a) for a in range(algebra.size))
    comp = completion(algebra.lattice, pow_alg.lattice, emb)
    if not is_dense(comp).passed:
        raise InvariantViolation("canonical extension is not dense")
    if not is_compact(comp).passed:
        raise InvariantViolation("canonical extension is not compact")
    return CanonicalExtension(comp, ufs, pow_alg)


@dataclass(frozen=True, eq=False)
class SigmaExtension:
    """The extension of a map to the powersets of the ultrafilter sets.

    ``table[A]`` is the image of the point set with bitmask A over the
    source ultrafilter order, itself a bitmask over the target order.
    """

    source_map: Union[BoolHom, MonotoneMap]
    source_points: int
    target_points: int
    table: tuple[int, ...]

    def apply(self, subset_mask: int) -> int:
        return self.table[subset_mask]


def sigma_extend(h: Union[BoolHom, MonotoneMap]) -> SigmaExtension:
    """Extend an order-preserving map by the filter-quantified join formula.

    For every point set A, the image is the union over all filters F of the
    source whose embedded intersection lies inside A of the intersection of
    the embedded h-images of the members of F.  The result is checked to be
    order-preserving and to extend h along the Stone embeddings.
    """
    src, dst = h.source, h.target
    if src.bottom == src.top or dst.bottom == dst.top:
        raise DegenerateAlgebra("extension needs nondegenerate algebras")
    n1 = len(ultrafilters(src))
    n2 = len(ultrafilters(dst))
    phi1 = [phi_mask(src, a) for a in range(src.size)]
    phi2 = [phi_mask(dst, b) for b in range(dst.size)]
    full2 = (1 << n2) - 1
    contributions = []
    for F in all_filters(src.lattice):
        inter1 = (1 << n1) - 1
        inter2 = full2
        for a in F.members:
            inter1 &= phi1[a]
            inter2 &= phi2[h.table[a]]
        contributions.append((inter1, inter2))
    table = []
    for A in range(1 << n1):
        out = 0
        for inter1, inter2 in contributions:
            if inter1 & ~A == 0:
                out |= inter2
        table.append(out)
    for A in range(1 << n1):
        for B in range(1 << n1):
            if A & ~B == 0 and table[A] & ~table[B] != 0:
                raise InvariantViolation("extension is not order-preserving", (A, B))
    for a in range(src.size):
        if table[phi1[a]] != phi2[h.table[a]]:
            raise InvariantViolation("extension does not extend the map", a)
    return SigmaExtension(h, n1, n2, tuple(table))


def completion_isomorphic(c1: Completion, c2: Completion) -> IsoVerdict:
    """Search for a lattice isomorphism commuting with the two embeddings.

    Backtracking over the unmatched elements, pruned by order signatures;
    intended only for completions with at most 16 elements.
    """
    if c1.base is not c2.base and c1.base.poset.leq != c2.base.poset.leq:
        raise ValueError("completions must share the base lattice")
    C1, C2 = c1.complete, c2.complete
    if C1.size != C2.size:
        return IsoVerdict(False)
    if C1.size > MAX_ISO_SEARCH:
        raise BoundExceeded(f"isomorphism search capped at {MAX_ISO_SEARCH}", C1.size)

    n = C1.size
    assign: dict[int, int] = {}
    used: set[int] = set()
    for a in range(c1.base.size):
        x, y = c1.embedding[a], c2.embedding[a]
        if assign.get(x, y) != y:
            return IsoVerdict(False)
        assign[x] = y
        used.add(y)
    if len(used) != len(assign):
        return IsoVerdict(False)

    def signature(lat: FinLattice, x: int) -> tuple[int, int]:
        below = sum(1 for k in range(n) if lat.leq_of(k, x))
        above = sum(1 for k in range(n) if lat.leq_of(x, k))
        return below, above

    sig1 = [signature(C1, x) for x in range(n)]
    sig2 = [signature(C2, y) for y in range(n)]
    free = [x for x in range(n) if x not in assign]

    def consistent(x: int, y: int, partial: dict[int, int]) -> bool:
        for u, v in partial.items():
            if C1.leq_of(x, u) != C2.leq_of(y, v) or C1.leq_of(u, x) != C2.leq_of(v, y):
                return False
        return True

    def preserves_ops(table: dict[int, int]) -> bool:
        for x in range(n):
            for y in range(n):
                if table[C1.meet_of(x, y)] != C2.meet_of(table[x], table[y]):
                    return False
                if table[C1.join_of(x, y)] != C2.join_of(table[x], table[y]):
                    return False
        return True

    def backtrack(i: int, partial: dict[int, int], taken: set[int]):
        if i == len(free):
            if preserves_ops(partial):
                return tuple(partial[x] for x in range(n))
            return None
        x = free[i]
        for y in range(n):
            if y in taken or sig1[x] != sig2[y] or not consistent(x, y, partial):
                continue
            partial[x] = y
            taken.add(y)
            found = backtrack(i + 1, partial, taken)
            if found is not None:
                return found
            del partial[x]
            taken.discard(y)
        return None

    witness = backtrack(0, dict(assign), set(used))
    if witness is None:
        return IsoVerdict(False)
    return IsoVerdict(True, witness)


def permuted_completion(c: Completion, perm: Sequence[int]) -> Completion:
    """The same completion with the complete lattice's carrier re-indexed.

    Used to generate dense and compact variants for the uniqueness checks;
    ``perm[i]`` is the new index of old element i.
    """
    if sorted(perm) != list(range(c.complete.size)):
        raise ValueError("not a permutation of the carrier")
    n = c.complete.size
    old = c.complete
    rows = [[False] * n for _ in range(n)]
    for i in range(n):
        for j in range(n):
            rows[perm[i]][perm[j]] = old.leq_of(i, j)
    relabeled = fin_lattice(fin_poset(rows))
    emb = tuple(perm[e] for e in c.embedding)
    return completion(c.base, relabeled, emb)
