"""The greatest compactification of a finite discrete space, built literally.

For a finite discrete space the compactification collapses: the space is
homeomorphic to itself.  The construction is nevertheless carried out
through the ultrafilter space of the powerset algebra, keeping points as
ultrafilter objects, because the verification harness chases the resulting
diagram extensionally and a shortcut would hide bugs.

Map extensions come in two independently computed flavours: the certified
unique continuous extension (found by exhausting every candidate table) and
the direct ultrafilter formula ``lift(f)(U) = {B : preimage of B in U}``.
Their agreement is one of the properties the test suite verifies.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import cache
from typing import Sequence

from .algebra import FinBoolAlg, UltraFilter, powerset_algebra, ultrafilters
from .duality import (
    ContinuousMap,
    FinStoneSpace,
    closure_mask,
    continuous_map,
    discrete_space,
    dual_space,
    topology,
    validate_stone,
)
from .errors import (
    BoundExceeded,
    EmptySpace,
    ImageNotDense,
    InvariantViolation,
    NoExtension,
    NotAnEmbedding,
)

MAX_BETA_POINTS = 5
MAX_SEARCH_CANDIDATES = 4**4


@dataclass(frozen=True, eq=False)
class Compactification:
    """A dense homeomorphic embedding of a discrete base into a Stone space.

    The raw constructor performs no validation (tests use it to build
    deliberately broken instances); ``build_compactification`` validates.
    """

    base: FinStoneSpace
    space: FinStoneSpace
    embed: tuple[int, ...]


@dataclass(frozen=True, eq=False)
class BetaSpace:
    """The powerset-dual compactification whose points are ultrafilters."""

    compactification: Compactification
    points_as_ultrafilters: tuple[UltraFilter, ...]
    algebra: FinBoolAlg

    @property
    def base(self) -> FinStoneSpace:
        return self.compactification.base

    @property
    def space(self) -> FinStoneSpace:
        return self.compactification.space

    @property
    def embed(self) -> tuple[int, ...]:
        return self.compactification.embed


def build_compactification(
    base: FinStoneSpace, space: FinStoneSpace, embed: Sequence[int]
) -> Compactification:
    """Validate injectivity, homeomorphic embedding, and density of the image.

    Density is checked by an actual closure computation in the generated
    topology, not inferred from surjectivity.
    """
    validate_stone(base)
    validate_stone(space)
    e = tuple(int(x) for x in embed)
    if len(e) != base.size or any(not 0 <= v < space.size for v in e):
        raise ValueError("embedding must map base points into the space")
    if len(set(e)) != len(e):
        raise NotAnEmbedding("embedding is not injective", e)
    image = sum(1 << v for v in e)
    opens = topology(space)
    for v in e:
        # Homeomorphism onto the image: each image point must be isolated
        # in the subspace topology, since the base is discrete.
        if not any(o >> v & 1 and o & image == 1 << v for o in opens):
            raise NotAnEmbedding("image subspace is not discrete at a point", v)
    if closure_mask(space, image) != (1 << space.size) - 1:
        raise ImageNotDense("closure of the embedded image is not the whole space")
    return Compactification(base, space, e)


@cache
def beta_space(points: tuple) -> BetaSpace:
    """The dual Stone space of the powerset algebra over the given points.

    The embedding sends a point to the ultrafilter of all subsets containing
    it; that description is checked literally against the members of each
    embedded ultrafilter.
    """
    if len(points) == 0:
        raise EmptySpace("cannot compactify the empty point set")
    if len(points) > MAX_BETA_POINTS:
        raise BoundExceeded(f"compactification capped at {MAX_BETA_POINTS} points", len(points))
    n = len(points)
    pow_alg = powerset_algebra(n)
    space = dual_space(pow_alg)
    ufs = ultrafilters(pow_alg)
    embed = []
    for i in range(n):
        expected = frozenset(m for m in range(1 << n) if m >> i & 1)
        hits = [k for k, u in enumerate(ufs) if u.members == expected]
        if len(hits) != 1:
            raise InvariantViolation("point has no unique principal ultrafilter", i)
        embed.append(hits[0])
    comp = build_compactification(discrete_space(points), space, embed)
    return BetaSpace(comp, ufs, pow_alg)


def extension_candidates(
    bx: BetaSpace, f: Sequence[int], target: FinStoneSpace
) -> list[tuple[int, ...]]:
    """All continuous tables g with g(embed(x)) = f(x); used for certification."""
    validate_stone(target)
    ft = tuple(int(x) for x in f)
    if len(ft) != bx.base.size or any(not 0 <= v < target.size for v in ft):
        raise ValueError("map must send base points into the target")
    total = target.size ** bx.space.size
    if total > MAX_SEARCH_CANDIDATES:
        raise BoundExceeded(f"candidate search capped at {MAX_SEARCH_CANDIDATES}", total)
    target_opens = topology(target)
    source_opens = set(topology(bx.space))
    out = []
    for cand in itertools.product(range(target.size), repeat=bx.space.size):
        if any(cand[bx.embed[i]] != ft[i] for i in range(bx.base.size)):
            continue
        if all(
            sum(1 << s for s, v in enumerate(cand) if o >> v & 1) in source_opens
            for o in target_opens
        ):
            out.append(cand)
    return out


def beta_extend_to_compact(
    bx: BetaSpace, f: Sequence[int], target: FinStoneSpace
) -> ContinuousMap:
    """The unique continuous extension of f along the compactification embedding.

    Uniqueness is certified by exhausting every candidate table; zero or
    multiple matches signal an invariant bug, never bad user input.
    """
    candidates = extension_candidates(bx, f, target)
    if not candidates:
        raise NoExtension("no continuous extension satisfies the equation")
    if len(candidates) > 1:
        raise InvariantViolation("continuous extension is not unique", len(candidates))
    return continuous_map(bx.space, target, candidates[0])


def beta_lift(f: Sequence[int], bx: BetaSpace, by: BetaSpace) -> ContinuousMap:
    """Lift a map between discrete point sets via the ultrafilter formula.

    The image of an ultrafilter U is {B : preimage of B under f lies in U},
    located among the points of the target compactification.
    """
    ft = tuple(int(x) for x in f)
    if len(ft) != bx.base.size or any(not 0 <= v < by.base.size for v in ft):
        raise ValueError("map must send base points into the target base")
    ny = by.base.size
    index = {u.members: k for k, u in enumerate(by.points_as_ultrafilters)}
    table = []
    for nabla in bx.points_as_ultrafilters:
        image_members = frozenset(
            mb
            for mb in range(1 << ny)
            if sum(1 << i for i, v in enumerate(ft) if mb >> v & 1) in nabla.members
        )
        if image_members not in index:
            raise InvariantViolation("lifted set is not an ultrafilter", image_members)
        table.append(index[image_members])
    return continuous_map(bx.space, by.space, table)


@dataclass(frozen=True)
class OrderVerdict:
    passed: bool
    witness: ContinuousMap | None = None


def _same_base(c1: Compactification, c2: Compactification) -> None:
    if c1.base.points != c2.base.points:
        raise ValueError("compactifications must share the base point set")


def compactification_leq(c1: Compactification, c2: Compactification) -> OrderVerdict:
    """Decide whether c2 is below c1 in the compactification order.

    Searches every map from c1's space to c2's for a continuous f with
    f(c1.embed(x)) = c2.embed(x); the witness exhibits c2 <= c1.
    """
    _same_base(c1, c2)
    total = c2.space.size ** c1.space.size
    if total > MAX_SEARCH_CANDIDATES:
        raise BoundExceeded(f"candidate search capped at {MAX_SEARCH_CANDIDATES}", total)
    target_opens = topology(c2.space)
    source_opens = set(topology(c1.space))
    for cand in itertools.product(range(c2.space.size), repeat=c1.space.size):
        if any(cand[c1.embed[i]] != c2.embed[i] for i in range(c1.base.size)):
            continue
        if all(
            sum(1 << s for s, v in enumerate(cand) if o >> v & 1) in source_opens
            for o in target_opens
        ):
            return OrderVerdict(True, ContinuousMap(c1.space, c2.space, cand))
    return OrderVerdict(False)


def compactification_equivalent(c1: Compactification, c2: Compactification) -> OrderVerdict:
    """As the order check but requiring a homeomorphism witness."""
    _same_base(c1, c2)
    if c1.space.size != c2.space.size:
        return OrderVerdict(False)
    n = c1.space.size
    if n > MAX_BETA_POINTS:
        raise BoundExceeded("homeomorphism search capped", n)
    source_opens = set(topology(c1.space))
    target_opens = topology(c2.space)
    for cand in itertools.permutations(range(n)):
        if any(cand[c1.embed[i]] != c2.embed[i] for i in range(c1.base.size)):
            continue
        forward_ok = all(
            sum(1 << s for s, v in enumerate(cand) if o >> v & 1) in source_opens
            for o in target_opens
        )
        inverse = [0] * n
        for s, v in enumerate(cand):
            inverse[v] = s
        backward_ok = all(
            sum(1 << s for s, v in enumerate(inverse) if o >> v & 1)
            in set(target_opens)
            for o in source_opens
        )
        if forward_ok and backward_ok:
            return OrderVerdict(True, ContinuousMap(c1.space, c2.space, cand))
    return OrderVerdict(False)


@dataclass(frozen=True)
class PreservationVerdict:
    property_name: str
    applicable: bool
    passed: bool


def beta_preserves(
    f: Sequence[int], bx: BetaSpace, by: BetaSpace, property_name: str
) -> PreservationVerdict:
    """Check that the lift inherits injectivity/surjectivity/bijectivity from f.

    When f lacks the property the implication holds vacuously; the verdict
    records applicability so callers can distinguish the two cases.  For a
    bijective f the lift must moreover be a homeomorphism (continuous
    inverse).
    """
    ft = tuple(int(x) for x in f)
    injective = len(set(ft)) == len(ft)
    surjective = set(ft) == set(range(by.base.size))
    lifted = beta_lift(ft, bx, by)
    if property_name == "one-to-one":
        return PreservationVerdict(
            property_name, injective, (not injective) or lifted.is_injective
        )
    if property_name == "onto":
        return PreservationVerdict(
            property_name, surjective, (not surjective) or lifted.is_surjective
        )
    if property_name == "bijective":
        applicable = injective and surjective
        if not applicable:
            return PreservationVerdict(property_name, False, True)
        if not (lifted.is_injective and lifted.is_surjective):
            return PreservationVerdict(property_name, True, False)
        inverse = [0] * by.space.size
        for s, v in enumerate(lifted.table):
            inverse[v] = s
        try:
            continuous_map(by.space, bx.space, inverse)
        except Exception:
            return PreservationVerdict(property_name, True, False)
        return PreservationVerdict(property_name, True, True)
    raise ValueError(f"unknown property {property_name!r}")
