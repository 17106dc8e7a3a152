"""Completions: density, compactness, the canonical extension, sigma maps.

The independent oracle for extension values is the preimage transform
computed directly from the hom table with plain set logic -- no code shared
with the filter-formula implementation.
"""

import itertools

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from stonecheck.algebra import (
    all_homs,
    hom_from_atom_function,
    identity_hom,
    monotone_map,
    powerset_algebra,
    ultrafilters,
)
from stonecheck.errors import BoundExceeded, DegenerateAlgebra, NotAnEmbedding
from stonecheck.extension import (
    canonical_extension,
    completion,
    completion_isomorphic,
    is_compact,
    is_dense,
    permuted_completion,
    sigma_extend,
)


def identity_completion(algebra):
    return completion(algebra.lattice, algebra.lattice, tuple(range(algebra.size)))


def sigma_oracle(hom):
    """Preimage transform: image(A) = {v : preimage of v under hom lies in A}."""
    ufs1 = ultrafilters(hom.source)
    ufs2 = ultrafilters(hom.target)
    uf_index = {u.members: i for i, u in enumerate(ufs1)}
    table = []
    for a_mask in range(1 << len(ufs1)):
        image = 0
        for k, v in enumerate(ufs2):
            pre = frozenset(
                x for x in range(hom.source.size) if hom.table[x] in v.members
            )
            if a_mask >> uf_index[pre] & 1:
                image |= 1 << k
        table.append(image)
    return tuple(table)


def test_identity_completion_is_dense_and_compact():
    for n in [1, 2, 3]:
        c = identity_completion(powerset_algebra(n))
        assert is_dense(c).passed
        assert is_compact(c).passed


def test_canonical_extension_is_dense_exhaustively():
    ext = canonical_extension(powerset_algebra(2))
    assert is_dense(ext.completion).passed


def test_padding_completion_fails_density():
    # embed the 4-element algebra into the 16-element one by zero-padding;
    # element {atom2} of the big algebra is not a join of embedded meets
    small = powerset_algebra(2)
    big = powerset_algebra(4)
    c = completion(small.lattice, big.lattice, (0, 1, 2, 3))
    verdict = is_dense(c)
    assert not verdict.passed
    assert verdict.element == 4
    assert verdict.side == "join"


def test_compactness_of_canonical_extension_of_three_atoms():
    ext = canonical_extension(powerset_algebra(3))
    assert is_compact(ext.completion).passed


def test_collapsing_embedding_is_rejected_before_compactness():
    four = powerset_algebra(2)
    two = powerset_algebra(1)
    with pytest.raises(NotAnEmbedding):
        completion(four.lattice, two.lattice, (0, 1, 1, 1))


def test_canonical_extension_sizes():
    assert canonical_extension(powerset_algebra(1)).algebra.size == 2
    assert canonical_extension(powerset_algebra(3)).algebra.size == 8
    assert canonical_extension(powerset_algebra(4)).algebra.size == 16


def test_canonical_extension_rejects_degenerate():
    with pytest.raises(DegenerateAlgebra):
        canonical_extension(powerset_algebra(0))


def test_canonical_extension_atoms_are_ultrafilter_singletons():
    ext = canonical_extension(powerset_algebra(3))
    assert set(ext.algebra.atoms) == {1 << k for k in range(len(ext.point_carrier))}


def test_sigma_of_identity_on_two_element_algebra():
    sigma = sigma_extend(identity_hom(powerset_algebra(1)))
    assert sigma.table == (0, 1)


def test_sigma_of_atom_selector_frozen_values():
    # h: P(2 atoms) -> 2 with h(a)=top iff atom0 <= a; the extension sends A
    # to {v} exactly when the ultrafilter at atom0 belongs to A.  Expected
    # values computed with the preimage-transform oracle.
    four, two = powerset_algebra(2), powerset_algebra(1)
    hom = hom_from_atom_function(four, two, (0,))
    sigma = sigma_extend(hom)
    assert sigma.table == sigma_oracle(hom)
    assert sigma.table == (0, 1, 0, 1)


def test_sigma_of_empty_set_is_empty():
    for k1, k2 in itertools.product([1, 2, 3], repeat=2):
        for hom in all_homs(powerset_algebra(k1), powerset_algebra(k2)):
            assert sigma_extend(hom).table[0] == 0


@pytest.mark.parametrize("k1, k2", list(itertools.product([1, 2, 3], repeat=2)))
def test_sigma_matches_preimage_oracle_exhaustively(k1, k2):
    for hom in all_homs(powerset_algebra(k1), powerset_algebra(k2)):
        assert sigma_extend(hom).table == sigma_oracle(hom)


def test_sigma_is_monotone_and_extends():
    four = powerset_algebra(2)
    for hom in all_homs(four, four):
        sigma = sigma_extend(hom)
        n1 = len(ultrafilters(four))
        for a in range(1 << n1):
            for b in range(1 << n1):
                if a & ~b == 0:
                    assert sigma.table[a] & ~sigma.table[b] == 0


def test_sigma_accepts_monotone_non_hom():
    four = powerset_algebra(2)
    bumpy = monotone_map((0, 3, 3, 3), four, four)
    sigma = sigma_extend(bumpy)
    assert sigma.table[0] == 0
    assert len(sigma.table) == 4


def test_completion_isomorphic_to_itself():
    ext = canonical_extension(powerset_algebra(2))
    verdict = completion_isomorphic(ext.completion, ext.completion)
    assert verdict.passed
    assert verdict.table == tuple(range(4))


def test_completion_isomorphic_to_relabeled_copy():
    ext = canonical_extension(powerset_algebra(2))
    shuffled = permuted_completion(ext.completion, (2, 0, 3, 1))
    verdict = completion_isomorphic(ext.completion, shuffled)
    assert verdict.passed
    assert verdict.table == (2, 0, 3, 1)


def test_identity_completion_isomorphic_to_canonical():
    algebra = powerset_algebra(2)
    verdict = completion_isomorphic(
        identity_completion(algebra), canonical_extension(algebra).completion
    )
    assert verdict.passed


def test_completion_isomorphic_requires_same_base():
    c1 = identity_completion(powerset_algebra(1))
    c2 = identity_completion(powerset_algebra(2))
    with pytest.raises(ValueError):
        completion_isomorphic(c1, c2)


def test_completion_isomorphic_bound():
    big = identity_completion(powerset_algebra(5))
    with pytest.raises(BoundExceeded):
        completion_isomorphic(big, big)


@pytest.mark.parametrize("n", [1, 2, 3])
def test_dense_compact_completions_are_unique_at_small_scale(n):
    algebra = powerset_algebra(n)
    canon = canonical_extension(algebra).completion
    candidates = [identity_completion(algebra), canon]
    # relabelings of the canonical completion stay dense and compact
    perms = [
        tuple(reversed(range(algebra.size))),
        tuple((i + 1) % algebra.size for i in range(algebra.size)),
    ]
    candidates += [permuted_completion(canon, perm) for perm in perms]
    for c in candidates:
        assert is_dense(c).passed and is_compact(c).passed
        assert completion_isomorphic(canon, c).passed


@settings(max_examples=20, deadline=None)
@given(st.permutations(range(4)))
def test_relabeled_canonical_completion_stays_isomorphic(perm):
    ext = canonical_extension(powerset_algebra(2))
    shuffled = permuted_completion(ext.completion, tuple(perm))
    assert is_dense(shuffled).passed
    assert is_compact(shuffled).passed
    assert completion_isomorphic(ext.completion, shuffled).passed
