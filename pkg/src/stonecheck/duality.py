"""Finite Stone spaces and the contravariant functors to and from Boolean algebras.

Spaces keep an explicit generating family rather than hard-coding
discreteness: the topology is genuinely generated from the base, the
Hausdorff property is verified from it, and inputs whose generated topology
fails to separate points are rejected.  Point sets are handled internally as
bitmasks over point indices.

Points of dual spaces are the ultrafilter values themselves, so that the
double-dual constructions can be manipulated extensionally.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cache
from typing import Sequence

from .algebra import (
    BoolHom,
    FinBoolAlg,
    UltraFilter,
    fin_bool_alg,
    fin_lattice,
    fin_poset,
    powerset_algebra,
    ultrafilters,
    validate_hom,
)
from .errors import InvariantViolation, NotContinuous, NotStone


@dataclass(frozen=True, eq=False)
class FinStoneSpace:
    """A finite point set with a distinguished generating family of subsets."""

    points: tuple
    base: tuple[frozenset[int], ...]

    @property
    def size(self) -> int:
        return len(self.points)

    def index_of(self, point) -> int:
        return self.points.index(point)

    def base_masks(self) -> tuple[int, ...]:
        return tuple(sum(1 << i for i in s) for s in self.base)


def stone_space(points: Sequence, base_sets: Sequence[frozenset[int]]) -> FinStoneSpace:
    """Package points and base sets (given as sets of point indices)."""
    pts = tuple(points)
    for s in base_sets:
        if any(not 0 <= i < len(pts) for i in s):
            raise ValueError("base set mentions a point outside the carrier")
    return FinStoneSpace(pts, tuple(frozenset(s) for s in base_sets))


def discrete_space(points: Sequence) -> FinStoneSpace:
    """The discrete space on the given points: base = all singletons."""
    pts = tuple(points)
    return FinStoneSpace(pts, tuple(frozenset({i}) for i in range(len(pts))))


@cache
def topology(space: FinStoneSpace) -> tuple[int, ...]:
    """All opens generated by the base, as a sorted tuple of point masks.

    The family is treated as a subbase: close under pairwise intersection
    (the empty intersection contributes the whole space), then under
    pairwise union (the empty union contributes the empty set).
    """
    full = (1 << space.size) - 1
    inters = {full}
    inters.update(space.base_masks())
    while True:
        new = {a & b for a in inters for b in inters} - inters
        if not new:
            break
        inters |= new
    opens = {0} | inters
    while True:
        new = {a | b for a in opens for b in opens} - opens
        if not new:
            break
        opens |= new
    return tuple(sorted(opens))


def is_open(space: FinStoneSpace, mask: int) -> bool:
    return mask in set(topology(space))


def closure_mask(space: FinStoneSpace, mask: int) -> int:
    """Smallest closed superset: drop every open disjoint from the set."""
    full = (1 << space.size) - 1
    avoid = 0
    for o in topology(space):
        if o & mask == 0:
            avoid |= o
    return full & ~avoid


def validate_stone(space: FinStoneSpace) -> tuple[int, ...]:
    """Verify the generated topology is Hausdorff and return it.

    Finite spaces are automatically compact, and a finite Hausdorff space is
    discrete (hence zero-dimensional); discreteness is asserted as an
    internal consistency check after the pairwise separation test.
    """
    opens = topology(space)
    for i in range(space.size):
        for j in range(i + 1, space.size):
            if not any(
                o1 >> i & 1 and o2 >> j & 1 and o1 & o2 == 0
                for o1 in opens
                for o2 in opens
            ):
                raise NotStone(
                    "points are not separated by disjoint opens",
                    (space.points[i], space.points[j]),
                )
    if len(opens) != 1 << space.size:
        raise InvariantViolation("finite Hausdorff space must be discrete")
    return opens


@dataclass(frozen=True, eq=False)
class ContinuousMap:
    """A point table validated so that preimages of opens are open."""

    source: FinStoneSpace
    target: FinStoneSpace
    table: tuple[int, ...]

    def apply(self, i: int) -> int:
        return self.table[i]

    @property
    def is_injective(self) -> bool:
        return len(set(self.table)) == len(self.table)

    @property
    def is_surjective(self) -> bool:
        return set(self.table) == set(range(self.target.size))

    def preimage_mask(self, target_mask: int) -> int:
        return sum(
            1 << i for i, v in enumerate(self.table) if target_mask >> v & 1
        )


def continuous_map(
    source: FinStoneSpace, target: FinStoneSpace, table: Sequence[int]
) -> ContinuousMap:
    t = tuple(int(x) for x in table)
    if len(t) != source.size or any(not 0 <= v < target.size for v in t):
        raise ValueError("table must map source points to target points")
    f = ContinuousMap(source, target, t)
    source_opens = set(topology(source))
    for o in topology(target):
        if f.preimage_mask(o) not in source_opens:
            raise NotContinuous("preimage of an open set is not open", o)
    return f


def compose_continuous(outer: ContinuousMap, inner: ContinuousMap) -> ContinuousMap:
    if inner.target is not outer.source:
        raise ValueError("maps do not compose")
    return continuous_map(
        inner.source, outer.target, tuple(outer.table[v] for v in inner.table)
    )


def phi(algebra: FinBoolAlg, a: int) -> frozenset[UltraFilter]:
    """The set of ultrafilters containing a (the Stone embedding of a)."""
    return frozenset(u for u in ultrafilters(algebra) if a in u.members)


def phi_mask(algebra: FinBoolAlg, a: int) -> int:
    """phi as a bitmask over the canonical ultrafilter order."""
    return sum(
        1 << i for i, u in enumerate(ultrafilters(algebra)) if a in u.members
    )


@cache
def dual_space(algebra: FinBoolAlg) -> FinStoneSpace:
    """The ultrafilter space with base {phi(a) : a in the carrier}, validated."""
    ufs = ultrafilters(algebra)
    base = tuple(
        frozenset(i for i, u in enumerate(ufs) if a in u.members)
        for a in range(algebra.size)
    )
    space = FinStoneSpace(ufs, base)
    validate_stone(space)
    return space


def dual_map(hom: BoolHom) -> ContinuousMap:
    """The continuous map Uf(target) -> Uf(source), v -> preimage of v under h.

    Each preimage is checked to be an ultrafilter of the source algebra.
    """
    src_space = dual_space(hom.target)
    dst_space = dual_space(hom.source)
    index = {u.members: i for i, u in enumerate(ultrafilters(hom.source))}
    table = []
    for v in ultrafilters(hom.target):
        pre = frozenset(a for a in range(hom.source.size) if hom.table[a] in v.members)
        if pre not in index:
            raise InvariantViolation("hom preimage of an ultrafilter is not one", v)
        table.append(index[pre])
    return continuous_map(src_space, dst_space, table)


@dataclass(frozen=True, eq=False)
class ClopenAlgebra:
    """The Boolean algebra of clopen sets of a space, ordered by inclusion."""

    space: FinStoneSpace
    algebra: FinBoolAlg
    clopen_masks: tuple[int, ...]

    def index_of_mask(self, mask: int) -> int:
        return self.clopen_masks.index(mask)


@cache
def clopen_algebra(space: FinStoneSpace) -> ClopenAlgebra:
    """Compute the clopen family from the generated topology and package it."""
    validate_stone(space)
    opens = set(topology(space))
    full = (1 << space.size) - 1
    clopens = sorted(o for o in opens if (full & ~o) in opens)
    n = len(clopens)
    rows = [[(clopens[i] & ~clopens[j]) == 0 for j in range(n)] for i in range(n)]
    comp = tuple(clopens.index(full & ~clopens[i]) for i in range(n))
    algebra = fin_bool_alg(fin_lattice(fin_poset(rows)), comp)
    return ClopenAlgebra(space, algebra, tuple(clopens))


def dual_of_continuous(f: ContinuousMap) -> BoolHom:
    """The homomorphism Clop(target) -> Clop(source), U -> preimage of U."""
    src_clop = clopen_algebra(f.target)
    dst_clop = clopen_algebra(f.source)
    table = [
        dst_clop.index_of_mask(f.preimage_mask(m)) for m in src_clop.clopen_masks
    ]
    return validate_hom(table, src_clop.algebra, dst_clop.algebra)


@dataclass(frozen=True, eq=False)
class RepresentationWitness:
    """A certified isomorphism from an algebra onto the clopens of its dual."""

    algebra: FinBoolAlg
    clopens: ClopenAlgebra
    table: tuple[int, ...]


def stone_representation(algebra: FinBoolAlg) -> RepresentationWitness:
    """Certify a -> phi(a) as a bijective homomorphism onto Clop(dual space).

    A failure here cannot come from user input; it would be a library bug,
    so it raises InvariantViolation.
    """
    clop = clopen_algebra(dual_space(algebra))
    table = tuple(
        clop.index_of_mask(phi_mask(algebra, a)) for a in range(algebra.size)
    )
    ca = clop.algebra
    if len(set(table)) != algebra.size or algebra.size != ca.size:
        raise InvariantViolation("representation is not bijective")
    for i in range(algebra.size):
        for j in range(algebra.size):
            if table[algebra.meet_of(i, j)] != ca.meet_of(table[i], table[j]):
                raise InvariantViolation("representation breaks meets", (i, j))
            if table[algebra.join_of(i, j)] != ca.join_of(table[i], table[j]):
                raise InvariantViolation("representation breaks joins", (i, j))
        if table[algebra.complement_of(i)] != ca.complement_of(table[i]):
            raise InvariantViolation("representation breaks complements", (i,))
    return RepresentationWitness(algebra, clop, table)


def hat_phi(algebra: FinBoolAlg, subset: frozenset[UltraFilter]) -> frozenset[UltraFilter]:
    """Double-dual embedding: ultrafilters of P(Uf(B)) whose members include the set.

    Computed literally over ultrafilter-of-powerset objects: the given set of
    ultrafilters is located as an element of the powerset algebra over the
    canonical ultrafilter order, and membership is tested in each ultrafilter
    of that algebra.
    """
    ufs = ultrafilters(algebra)
    mask = 0
    for u in subset:
        mask |= 1 << ufs.index(u)
    return frozenset(
        nabla
        for nabla in ultrafilters(powerset_algebra(len(ufs)))
        if mask in nabla.members
    )


def hat_phi_point_mask(algebra: FinBoolAlg, subset_mask: int) -> int:
    """hat_phi with both the input set and the output points as bitmasks."""
    n = len(ultrafilters(algebra))
    return sum(
        1 << k
        for k, nabla in enumerate(ultrafilters(powerset_algebra(n)))
        if subset_mask in nabla.members
    )
