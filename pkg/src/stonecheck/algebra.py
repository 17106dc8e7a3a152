"""Finite posets, lattices, and Boolean algebras with filters and homomorphisms.

Carriers are index based: the elements of a structure of size n are the
integers 0..n-1.  A validated Boolean algebra additionally carries its
canonical atom-bitmask form: element i is assigned the bitmask of the atoms
below it, which identifies the algebra with the powerset of its atom set and
makes order and operations single-word bit operations.  For powerset
algebras the element index *is* its atom mask.

Filters and ideals are stored extensionally (as element sets).  The fast
enumerations exploit that every filter of a finite lattice is a principal
up-set; the subset-scanning brute-force enumerations are kept alongside as
cross-check oracles for the test suite.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import cache
from typing import Iterable, Sequence

from .errors import (
    BoundExceeded,
    ComplementLawFails,
    DegenerateAlgebra,
    InvariantViolation,
    NotALattice,
    NotAPoset,
    NotComplementPreserving,
    NotDistributive,
    NotJoinPreserving,
    NotMeetPreserving,
    NotOrderPreserving,
)

# Hard caps: single-algebra operations stop at 5 atoms (32 elements), hom
# enumeration at 4 atoms, and subset-scanning oracles at 16-element carriers,
# so that double-powerset constructions stay under 2**16 subsets.
MAX_ATOMS = 5
MAX_HOM_ATOMS = 4
MAX_BRUTE_FORCE_CARRIER = 16


@dataclass(frozen=True, eq=False)
class FinPoset:
    """A finite partial order; ``leq[i][j]`` holds iff element i <= element j."""

    leq: tuple[tuple[bool, ...], ...]

    @property
    def size(self) -> int:
        return len(self.leq)

    def leq_of(self, i: int, j: int) -> bool:
        return self.leq[i][j]

    def upset(self, i: int) -> frozenset[int]:
        return frozenset(j for j in range(self.size) if self.leq[i][j])

    def downset(self, i: int) -> frozenset[int]:
        return frozenset(j for j in range(self.size) if self.leq[j][i])


def fin_poset(rows: Sequence[Sequence[bool]]) -> FinPoset:
    """Validate a relation matrix as a partial order.

    Raises NotAPoset naming the first witnessing tuple, scanning
    reflexivity, then antisymmetry, then transitivity in index order.
    """
    n = len(rows)
    if n == 0:
        raise ValueError("carrier must be nonempty")
    leq = tuple(tuple(bool(x) for x in row) for row in rows)
    if any(len(row) != n for row in leq):
        raise ValueError("relation matrix must be square")
    for i in range(n):
        if not leq[i][i]:
            raise NotAPoset("relation is not reflexive", ("reflexivity", i))
    for i in range(n):
        for j in range(i + 1, n):
            if leq[i][j] and leq[j][i]:
                raise NotAPoset("relation is not antisymmetric", ("antisymmetry", i, j))
    for i in range(n):
        for j in range(n):
            if not leq[i][j]:
                continue
            for k in range(n):
                if leq[j][k] and not leq[i][k]:
                    raise NotAPoset("relation is not transitive", ("transitivity", i, j, k))
    return FinPoset(leq)


@dataclass(frozen=True, eq=False)
class FinLattice:
    """A finite lattice: a poset plus total meet/join tables and its bounds."""

    poset: FinPoset
    meet: tuple[tuple[int, ...], ...]
    join: tuple[tuple[int, ...], ...]
    bottom: int
    top: int

    @property
    def size(self) -> int:
        return self.poset.size

    def leq_of(self, i: int, j: int) -> bool:
        return self.poset.leq[i][j]

    def meet_of(self, i: int, j: int) -> int:
        return self.meet[i][j]

    def join_of(self, i: int, j: int) -> int:
        return self.join[i][j]

    def meet_all(self, elems: Iterable[int]) -> int:
        """Meet of an arbitrary finite family; the empty meet is top."""
        out = self.top
        for e in elems:
            out = self.meet[out][e]
        return out

    def join_all(self, elems: Iterable[int]) -> int:
        """Join of an arbitrary finite family; the empty join is bottom."""
        out = self.bottom
        for e in elems:
            out = self.join[out][e]
        return out


def fin_lattice(poset: FinPoset) -> FinLattice:
    """Check that every pair has a unique meet and join and tabulate them."""
    n = poset.size
    leq = poset.leq

    def least_upper(i: int, j: int) -> int:
        uppers = [k for k in range(n) if leq[i][k] and leq[j][k]]
        for u in uppers:
            if all(leq[u][k] for k in uppers):
                return u
        raise NotALattice("pair has no least upper bound", ("join", i, j))

    def greatest_lower(i: int, j: int) -> int:
        lowers = [k for k in range(n) if leq[k][i] and leq[k][j]]
        for g in lowers:
            if all(leq[k][g] for k in lowers):
                return g
        raise NotALattice("pair has no greatest lower bound", ("meet", i, j))

    join = tuple(tuple(least_upper(i, j) for j in range(n)) for i in range(n))
    meet = tuple(tuple(greatest_lower(i, j) for j in range(n)) for i in range(n))
    bottom = next(i for i in range(n) if all(leq[i][j] for j in range(n)))
    top = next(i for i in range(n) if all(leq[j][i] for j in range(n)))
    return FinLattice(poset, meet, join, bottom, top)


@dataclass(frozen=True, eq=False)
class FinBoolAlg:
    """A finite Boolean algebra in canonical atom-bitmask form."""

    lattice: FinLattice
    complement: tuple[int, ...]
    atoms: tuple[int, ...]
    atom_mask: tuple[int, ...]
    _mask_index: dict

    @property
    def size(self) -> int:
        return self.lattice.size

    @property
    def atom_count(self) -> int:
        return len(self.atoms)

    @property
    def bottom(self) -> int:
        return self.lattice.bottom

    @property
    def top(self) -> int:
        return self.lattice.top

    def leq_of(self, i: int, j: int) -> bool:
        return self.lattice.leq_of(i, j)

    def meet_of(self, i: int, j: int) -> int:
        return self.lattice.meet[i][j]

    def join_of(self, i: int, j: int) -> int:
        return self.lattice.join[i][j]

    def complement_of(self, i: int) -> int:
        return self.complement[i]

    def mask_of(self, i: int) -> int:
        return self.atom_mask[i]

    def element_of_mask(self, mask: int) -> int:
        return self._mask_index[mask]


def fin_bool_alg(lattice: FinLattice, complement: Sequence[int]) -> FinBoolAlg:
    """Validate distributivity and the complement laws, then canonicalize.

    The atom-bitmask encoding is computed afterwards; by Birkhoff's
    description of finite Boolean algebras it must be an order isomorphism
    onto the powerset of the atom set, so any failure there is reported as
    an internal invariant violation rather than a user error.
    """
    n = lattice.size
    comp = tuple(int(c) for c in complement)
    if len(comp) != n or any(not 0 <= c < n for c in comp):
        raise ValueError("complement table must map the carrier into itself")
    meet, join = lattice.meet, lattice.join
    for x in range(n):
        for y in range(n):
            for z in range(n):
                if meet[x][join[y][z]] != join[meet[x][y]][meet[x][z]]:
                    raise NotDistributive("distributive law fails", (x, y, z))
    for x in range(n):
        if meet[x][comp[x]] != lattice.bottom:
            raise ComplementLawFails("x and not-x do not meet to bottom", (x, comp[x]))
        if join[x][comp[x]] != lattice.top:
            raise ComplementLawFails("x and not-x do not join to top", (x, comp[x]))

    leq = lattice.poset.leq
    bottom = lattice.bottom
    atoms = tuple(
        i
        for i in range(n)
        if i != bottom and all(j == bottom or j == i for j in range(n) if leq[j][i])
    )
    atom_mask = tuple(
        sum(1 << k for k, a in enumerate(atoms) if leq[a][i]) for i in range(n)
    )
    mask_index = {m: i for i, m in enumerate(atom_mask)}
    if len(mask_index) != n or n != 1 << len(atoms):
        raise InvariantViolation("atom encoding is not a bijection", (n, len(atoms)))
    for i in range(n):
        for j in range(n):
            if leq[i][j] != (atom_mask[i] & ~atom_mask[j] == 0):
                raise InvariantViolation("atom encoding does not match the order", (i, j))
    return FinBoolAlg(lattice, comp, atoms, atom_mask, mask_index)


def validate_boolean_algebra(
    size: int,
    leq_pairs: Iterable[tuple[int, int]],
    complement: Sequence[int],
) -> FinBoolAlg:
    """Validate an abstract presentation (carrier + order pairs + complements).

    The pair list is taken literally: reflexive pairs must be present and
    the relation must already be transitively closed, or NotAPoset is
    raised with the offending tuple.
    """
    rows = [[False] * size for _ in range(size)]
    for i, j in leq_pairs:
        if not (0 <= i < size and 0 <= j < size):
            raise ValueError(f"order pair ({i}, {j}) is outside the carrier")
        rows[i][j] = True
    return fin_bool_alg(fin_lattice(fin_poset(rows)), complement)


def atoms_of(algebra: FinBoolAlg) -> tuple[int, ...]:
    """All minimal nonzero elements (empty for the one-element algebra)."""
    return algebra.atoms


def export_presentation(algebra: FinBoolAlg) -> tuple[int, list[tuple[int, int]], tuple[int, ...]]:
    """Dump an algebra back to the abstract form accepted by the validator."""
    n = algebra.size
    pairs = [(i, j) for i in range(n) for j in range(n) if algebra.leq_of(i, j)]
    return n, pairs, algebra.complement


@cache
def powerset_algebra(n: int) -> FinBoolAlg:
    """The 2**n-element powerset algebra; element index == atom mask."""
    if n < 0:
        raise ValueError("atom count must be nonnegative")
    if n > MAX_ATOMS:
        raise BoundExceeded(f"powerset algebra capped at {MAX_ATOMS} atoms", n)
    size = 1 << n
    rows = [[(i & ~j) == 0 for j in range(size)] for i in range(size)]
    full = size - 1
    algebra = fin_bool_alg(
        fin_lattice(fin_poset(rows)), tuple(full ^ m for m in range(size))
    )
    if algebra.atom_mask != tuple(range(size)):
        raise InvariantViolation("powerset algebra is not in canonical form", n)
    return algebra


@dataclass(frozen=True)
class Filter:
    """An upward-closed, meet-closed subset containing top (improper allowed)."""

    lattice: FinLattice
    members: frozenset[int]

    @property
    def generator(self) -> int:
        """In a finite lattice every filter is the up-set of its total meet."""
        return self.lattice.meet_all(self.members)


@dataclass(frozen=True)
class Ideal:
    """An downward-closed, join-closed subset containing bottom."""

    lattice: FinLattice
    members: frozenset[int]

    @property
    def generator(self) -> int:
        return self.lattice.join_all(self.members)


@dataclass(frozen=True)
class UltraFilter:
    """A maximal proper filter; principal at a unique atom in the finite case."""

    algebra: FinBoolAlg
    filter: Filter
    atom: int

    @property
    def members(self) -> frozenset[int]:
        return self.filter.members


def is_filter(lattice: FinLattice, members: frozenset[int]) -> bool:
    if lattice.top not in members:
        return False
    for i in members:
        if not lattice.poset.upset(i) <= members:
            return False
        for j in members:
            if lattice.meet[i][j] not in members:
                return False
    return True


def is_ideal(lattice: FinLattice, members: frozenset[int]) -> bool:
    if lattice.bottom not in members:
        return False
    for i in members:
        if not lattice.poset.downset(i) <= members:
            return False
        for j in members:
            if lattice.join[i][j] not in members:
                return False
    return True


@cache
def all_filters(lattice: FinLattice) -> tuple[Filter, ...]:
    """Every filter of a finite lattice: the principal up-sets, one per element.

    Ordered by generating element index.  ``all_filters_bruteforce`` is the
    subset-scanning oracle this enumeration is tested against.
    """
    return tuple(
        Filter(lattice, lattice.poset.upset(x)) for x in range(lattice.size)
    )


@cache
def all_ideals(lattice: FinLattice) -> tuple[Ideal, ...]:
    return tuple(
        Ideal(lattice, lattice.poset.downset(x)) for x in range(lattice.size)
    )


def all_filters_bruteforce(lattice: FinLattice) -> set[frozenset[int]]:
    """Scan all subsets against the filter axioms (cross-check oracle)."""
    n = lattice.size
    if n > MAX_BRUTE_FORCE_CARRIER:
        raise BoundExceeded("subset scan capped", n)
    found = set()
    for bits in range(1 << n):
        members = frozenset(i for i in range(n) if bits >> i & 1)
        if members and is_filter(lattice, members):
            found.add(members)
    return found


def all_ideals_bruteforce(lattice: FinLattice) -> set[frozenset[int]]:
    n = lattice.size
    if n > MAX_BRUTE_FORCE_CARRIER:
        raise BoundExceeded("subset scan capped", n)
    found = set()
    for bits in range(1 << n):
        members = frozenset(i for i in range(n) if bits >> i & 1)
        if members and is_ideal(lattice, members):
            found.add(members)
    return found


@cache
def ultrafilters(algebra: FinBoolAlg) -> tuple[UltraFilter, ...]:
    """All maximal proper filters, sorted by the generating atom's mask.

    In a finite Boolean algebra these are exactly the principal up-sets of
    atoms; ``ultrafilters_bruteforce`` provides the maximality-based oracle.
    """
    if algebra.bottom == algebra.top:
        raise DegenerateAlgebra("the one-element algebra has no proper filters")
    lat = algebra.lattice
    ufs = [
        UltraFilter(algebra, Filter(lat, lat.poset.upset(a)), a)
        for a in algebra.atoms
    ]
    ufs.sort(key=lambda u: algebra.mask_of(u.atom))
    return tuple(ufs)


def ultrafilters_bruteforce(algebra: FinBoolAlg) -> set[frozenset[int]]:
    """Maximal proper filters found by scanning all filters (oracle)."""
    if algebra.bottom == algebra.top:
        raise DegenerateAlgebra("the one-element algebra has no proper filters")
    proper = [
        f for f in all_filters_bruteforce(algebra.lattice)
        if algebra.bottom not in f
    ]
    return {f for f in proper if not any(f < g for g in proper)}


@dataclass(frozen=True)
class BoolHom:
    """A validated Boolean homomorphism given by its image table."""

    source: FinBoolAlg
    target: FinBoolAlg
    table: tuple[int, ...]

    def apply(self, i: int) -> int:
        return self.table[i]

    @property
    def is_injective(self) -> bool:
        return len(set(self.table)) == len(self.table)

    @property
    def is_surjective(self) -> bool:
        return set(self.table) == set(range(self.target.size))


@dataclass(frozen=True)
class MonotoneMap:
    """A validated order-preserving map that need not be a homomorphism."""

    source: FinBoolAlg
    target: FinBoolAlg
    table: tuple[int, ...]

    def apply(self, i: int) -> int:
        return self.table[i]


def validate_hom(table: Sequence[int], source: FinBoolAlg, target: FinBoolAlg) -> BoolHom:
    """Accept a raw image table as a homomorphism or name the first broken law.

    Bottom preservation is checked with the meets (bottom is the meet of the
    whole carrier) and top preservation with the joins.
    """
    t = tuple(int(x) for x in table)
    if len(t) != source.size or any(not 0 <= v < target.size for v in t):
        raise ValueError("table must map the source carrier into the target carrier")
    if t[source.bottom] != target.bottom:
        raise NotMeetPreserving("bottom must map to bottom", ("bottom", source.bottom))
    for i in range(source.size):
        for j in range(source.size):
            if t[source.meet_of(i, j)] != target.meet_of(t[i], t[j]):
                raise NotMeetPreserving("meet not preserved", (i, j))
    if t[source.top] != target.top:
        raise NotJoinPreserving("top must map to top", ("top", source.top))
    for i in range(source.size):
        for j in range(source.size):
            if t[source.join_of(i, j)] != target.join_of(t[i], t[j]):
                raise NotJoinPreserving("join not preserved", (i, j))
    for i in range(source.size):
        if t[source.complement_of(i)] != target.complement_of(t[i]):
            raise NotComplementPreserving("complement not preserved", (i,))
    return BoolHom(source, target, t)


def monotone_map(table: Sequence[int], source: FinBoolAlg, target: FinBoolAlg) -> MonotoneMap:
    t = tuple(int(x) for x in table)
    if len(t) != source.size or any(not 0 <= v < target.size for v in t):
        raise ValueError("table must map the source carrier into the target carrier")
    for i in range(source.size):
        for j in range(source.size):
            if source.leq_of(i, j) and not target.leq_of(t[i], t[j]):
                raise NotOrderPreserving("order not preserved", (i, j))
    return MonotoneMap(source, target, t)


def identity_hom(algebra: FinBoolAlg) -> BoolHom:
    return validate_hom(tuple(range(algebra.size)), algebra, algebra)


def compose_homs(outer: BoolHom, inner: BoolHom) -> BoolHom:
    """The homomorphism outer∘inner (inner applied first)."""
    if inner.target is not outer.source:
        raise ValueError("homomorphisms do not compose")
    return validate_hom(
        tuple(outer.table[v] for v in inner.table), inner.source, outer.target
    )


def hom_from_atom_function(
    source: FinBoolAlg, target: FinBoolAlg, atom_function: Sequence[int]
) -> BoolHom:
    """Expand a function from target atoms to source atoms into the hom it induces.

    ``atom_function[q] = p`` says that the q-th atom of the target tracks the
    p-th atom of the source: h(a) is the target element whose atoms are
    exactly those q with atom p below a.  This is the dual description of a
    homomorphism used both by the exhaustive generator and by the document
    shorthand.
    """
    g = tuple(int(x) for x in atom_function)
    if len(g) != target.atom_count or any(not 0 <= p < source.atom_count for p in g):
        raise ValueError("atom function must map target atoms to source atoms")
    table = []
    for i in range(source.size):
        m1 = source.mask_of(i)
        m2 = sum(1 << q for q in range(target.atom_count) if m1 >> g[q] & 1)
        table.append(target.element_of_mask(m2))
    return validate_hom(table, source, target)


def atom_function_of_hom(hom: BoolHom) -> tuple[int, ...]:
    """Recover the dual atom function; inverse of ``hom_from_atom_function``."""
    src, dst = hom.source, hom.target
    out = []
    for q_atom in dst.atoms:
        preimage = [a for a in range(src.size) if dst.leq_of(q_atom, hom.table[a])]
        generator = src.lattice.meet_all(preimage)
        out.append(src.atoms.index(generator))
    return tuple(out)


def all_homs(source: FinBoolAlg, target: FinBoolAlg) -> tuple[BoolHom, ...]:
    """Every homomorphism source -> target, in lexicographic atom-function order.

    The count always equals |Uf(source)| ** |Uf(target)|; the generator
    asserts this, and the test suite cross-checks against a raw table scan.
    """
    if source.atom_count > MAX_HOM_ATOMS or target.atom_count > MAX_HOM_ATOMS:
        raise BoundExceeded(
            f"hom enumeration capped at {MAX_HOM_ATOMS} atoms",
            (source.atom_count, target.atom_count),
        )
    homs = tuple(
        hom_from_atom_function(source, target, g)
        for g in itertools.product(range(source.atom_count), repeat=target.atom_count)
    )
    expected = source.atom_count ** target.atom_count
    if len(homs) != expected or len({h.table for h in homs}) != expected:
        raise InvariantViolation("hom enumeration does not match the duality count")
    return homs


def all_homs_bruteforce(source: FinBoolAlg, target: FinBoolAlg) -> set[tuple[int, ...]]:
    """All hom tables found by filtering every raw table (oracle; tiny sizes only)."""
    if target.size ** source.size > 1 << 16:
        raise BoundExceeded("table scan capped", (source.size, target.size))
    found = set()
    for table in itertools.product(range(target.size), repeat=source.size):
        try:
            found.add(validate_hom(table, source, target).table)
        except (NotMeetPreserving, NotJoinPreserving, NotComplementPreserving):
            pass
    return found
