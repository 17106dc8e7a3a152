"""The diagram bundle, the double-dual map, and the verification suite."""

import itertools
import json

import pytest

from stonecheck.algebra import (
    all_homs,
    hom_from_atom_function,
    identity_hom,
    monotone_map,
    powerset_algebra,
    ultrafilters,
)
from stonecheck.duality import phi_mask
from stonecheck.errors import BoundExceeded
from stonecheck.extension import sigma_extend
from stonecheck.harness import (
    build_diagram,
    double_dual_map,
    exhaustive_suite,
    explore_monotone,
    full_hom_instance,
    report_jsonable,
    shrink_failing_hom,
    verify_corollary,
    verify_main_theorem,
)


def test_identity_diagram_is_all_identities():
    two = powerset_algebra(1)
    bundle = build_diagram(identity_hom(two))
    assert bundle.h_star.table == (0,)
    assert bundle.h_star_beta.table == (0,)
    assert bundle.double_dual == (0, 1)


def test_unique_embedding_gives_constant_arrows():
    two, four = powerset_algebra(1), powerset_algebra(2)
    bundle = build_diagram(hom_from_atom_function(two, four, (0, 0)))
    assert set(bundle.h_star.table) == {0}
    assert set(bundle.h_star_beta.table) == {0}


def test_atom_swap_gives_swapped_arrows():
    four = powerset_algebra(2)
    swap = hom_from_atom_function(four, four, (1, 0))
    bundle = build_diagram(swap)
    assert bundle.h_star.table == (1, 0)
    assert bundle.h_star_beta.table == (1, 0)
    # the double dual swaps the two singleton subsets
    assert bundle.double_dual == (0, 2, 1, 3)


def test_double_dual_at_bounds():
    four = powerset_algebra(2)
    for hom in all_homs(four, four):
        bundle = build_diagram(hom)
        n1 = len(ultrafilters(four))
        n2 = len(ultrafilters(four))
        assert double_dual_map(bundle, 0) == 0
        assert double_dual_map(bundle, (1 << n1) - 1) == (1 << n2) - 1


def test_diagram_bound():
    with pytest.raises(BoundExceeded):
        build_diagram(identity_hom(powerset_algebra(5)))


def test_verify_main_theorem_identity():
    report = verify_main_theorem(identity_hom(powerset_algebra(2)))
    assert report.all_passed


@pytest.mark.parametrize("k1, k2", list(itertools.product([1, 2, 3], repeat=2)))
def test_main_theorem_exhaustive_small(k1, k2):
    for hom in all_homs(powerset_algebra(k1), powerset_algebra(k2)):
        bundle = build_diagram(hom)
        sigma = sigma_extend(hom)
        assert sigma.table == bundle.double_dual


def test_outer_rectangle_on_elements():
    for k1, k2 in itertools.product([1, 2, 3], repeat=2):
        b1, b2 = powerset_algebra(k1), powerset_algebra(k2)
        for hom in all_homs(b1, b2):
            bundle = build_diagram(hom)
            for a in range(b1.size):
                assert bundle.double_dual[phi_mask(b1, a)] == phi_mask(b2, hom.table[a])


def test_verify_corollary_injective_case():
    two, four = powerset_algebra(1), powerset_algebra(2)
    embed = hom_from_atom_function(two, four, (0, 0))
    assert embed.is_injective
    report = verify_corollary(embed)
    assert report.all_passed
    sigma = sigma_extend(embed)
    assert len(set(sigma.table)) == len(sigma.table)


def test_verify_corollary_surjective_case():
    four, two = powerset_algebra(2), powerset_algebra(1)
    collapse = hom_from_atom_function(four, two, (0,))
    assert collapse.is_surjective
    report = verify_corollary(collapse)
    assert report.all_passed
    sigma = sigma_extend(collapse)
    assert set(sigma.table) == {0, 1}


def test_verify_corollary_automorphism_case():
    four = powerset_algebra(2)
    swap = hom_from_atom_function(four, four, (1, 0))
    report = verify_corollary(swap)
    assert report.all_passed
    sigma = sigma_extend(swap)
    assert sorted(sigma.table) == list(range(4))


def test_explore_monotone_records_without_asserting():
    four = powerset_algebra(2)
    bumpy = monotone_map((0, 3, 3, 3), four, four)  # meets broken at the atoms
    inst = explore_monotone(bumpy)
    assert all(c.verdict == "info" for c in inst.checks)
    by_name = {c.name: c.witness for c in inst.checks}
    assert by_name["dual_preimages_are_ultrafilters"]["holds"] is False


def test_explore_monotone_on_actual_hom_agrees():
    four = powerset_algebra(2)
    inst = explore_monotone(monotone_map(identity_hom(four).table, four, four))
    by_name = {c.name: c.witness for c in inst.checks}
    assert by_name["dual_preimages_are_ultrafilters"]["holds"] is True
    assert by_name["sigma_matches_preimage_transform"]["holds"] is True


def test_suite_at_one_atom():
    report = exhaustive_suite(1)
    homs = [i for i in report.instances if i.descriptor["kind"] == "hom"]
    assert len(homs) == 1
    assert report.all_passed


def test_suite_at_two_atoms_counts_eight_homs():
    report = exhaustive_suite(2)
    homs = [i for i in report.instances if i.descriptor["kind"] == "hom"]
    assert len(homs) == 1 + 1 + 2 + 4
    assert report.all_passed


def test_suite_at_three_atoms_matches_duality_count():
    report = exhaustive_suite(3)
    homs = [i for i in report.instances if i.descriptor["kind"] == "hom"]
    expected = sum(k1**k2 for k1 in [1, 2, 3] for k2 in [1, 2, 3])
    assert len(homs) == expected == 56
    assert report.all_passed


def test_suite_bound():
    with pytest.raises(BoundExceeded):
        exhaustive_suite(5)


def test_sampled_suite_is_deterministic():
    a = exhaustive_suite(3, sample=(42, 10))
    b = exhaustive_suite(3, sample=(42, 10))
    assert json.dumps(report_jsonable(a)) == json.dumps(report_jsonable(b))
    c = exhaustive_suite(3, sample=(43, 10))
    assert json.dumps(report_jsonable(a)) != json.dumps(report_jsonable(c))


def test_report_serialization_zeroes_timing():
    report = verify_main_theorem(identity_hom(powerset_algebra(1)))
    payload = report_jsonable(report)
    assert all(inst["timing_ms"] == 0 for inst in payload)


def test_full_instance_check_names():
    inst = full_hom_instance(identity_hom(powerset_algebra(2)))
    names = {c.name for c in inst.checks}
    assert {
        "sigma_equals_double_dual",
        "embedded_elements_preserved",
        "preimage_membership_equivalence",
        "sigma_is_boolean_hom",
        "sigma_injective_when_injective",
        "sigma_surjective_when_surjective",
        "sigma_isomorphism_when_isomorphism",
        "unique_continuous_extension",
        "extension_square_commutes",
        "lift_paths_agree",
        "forward_image_in_lifted_ultrafilter",
    } == names


def test_shrinker_finds_minimal_failing_instance():
    # synthetic predicate: "fails" whenever the target has >= 2 atoms;
    # the shrinker must walk down to a two-atom target
    start = hom_from_atom_function(powerset_algebra(3), powerset_algebra(3), (0, 1, 2))

    def fails(candidate):
        return candidate.target.atom_count >= 2

    shrunk = shrink_failing_hom(start, fails)
    assert shrunk["target_atoms"] == 2
    assert shrunk["source_atoms"] <= 2


def test_shrinker_keeps_unshrinkable_instance():
    start = hom_from_atom_function(powerset_algebra(2), powerset_algebra(1), (0,))

    def fails(candidate):
        return True

    shrunk = shrink_failing_hom(start, fails)
    assert shrunk["target_atoms"] == 1
    assert shrunk["source_atoms"] == 1


def test_reports_sort_deterministically():
    report = exhaustive_suite(2)
    keys = [json.dumps(i.descriptor, sort_keys=True) for i in report.instances]
    assert keys == sorted(keys)
