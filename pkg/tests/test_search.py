import random

import pytest

from sedf.cyclotomy import build_cyclotomy
from sedf.designs import Family, PdsType, verify_sedf
from sedf.errors import SedfError
from sedf.groups import cyclic, field
from sedf.search import (
    SearchConfig,
    canonical_family,
    ds_census,
    exhaustive_sedf,
    feasible_sedf_parameters,
    groups_of_order,
    pds_census,
    scan_diophantine,
)


def qs(kind, q_max):
    return [q for q, _ in scan_diophantine(kind, q_max)]


def test_scan_examples():
    assert scan_diophantine("octic1", 100) == [(73, {"y": 1, "b": 3})]
    assert qs("sextic", 500) == [109, 433]
    assert qs("quartic_sedf", 300) == [17, 257]
    assert qs("octic2", 26041) == [26041]
    assert qs("quartic_residue", 200) == [5, 37, 101, 197]
    assert qs("quartic_residue_plus_zero", 200) == [13, 109]
    assert qs("paley", 30) == [5, 9, 13, 17, 25, 29]
    assert qs("quadratic_gsedf", 30) == [3, 7, 11, 19, 23, 27]
    with pytest.raises(SedfError):
        scan_diophantine("bogus", 10)


def test_octic_residue_has_no_example_between_73_and_the_cap():
    assert qs("octic1", 2**20) == [73]


def test_paley_pair_is_rediscovered_in_z13():
    res = exhaustive_sedf(SearchConfig(cyclic(13), 2, 6))
    assert res.exhaustive and res.lam == 3
    c0, c1 = build_cyclotomy(field(13), 2).classes
    paley = canonical_family([c0.tolist(), c1.tolist()], cyclic(13).subtraction_table())
    assert paley in res.families
    assert all(verify_sedf(F).ok for F in res.family_objects())


def test_non_integral_lambda_is_pruned_immediately():
    res = exhaustive_sedf(SearchConfig(cyclic(21), 3, 2))
    assert res.families == [] and res.nodes == 0 and res.exhaustive and res.lam is None


def test_trivial_singletons_are_found():
    res = exhaustive_sedf(SearchConfig(cyclic(5), 5, 1))
    assert res.families == [((0,), (1,), (2,), (3,), (4,))]


def test_small_m3_cases_are_empty():
    for n, k, _ in feasible_sedf_parameters(12, 3):
        for g in groups_of_order(n):
            res = exhaustive_sedf(SearchConfig(g, 3, k))
            assert res.exhaustive and res.families == []


def test_canonical_form_is_translation_invariant():
    res = exhaustive_sedf(SearchConfig(cyclic(13), 2, 6))
    g = cyclic(13)
    sub = g.subtraction_table()
    rng = random.Random(7)
    for fam in res.families:
        for _ in range(5):
            t = rng.randrange(13)
            moved = [[g.add(x, t) for x in s] for s in fam]
            rng.shuffle(moved)
            assert canonical_family(moved, sub) in res.families


def test_field_group_search():
    res = exhaustive_sedf(SearchConfig(field(9), 2, 4))
    assert res.exhaustive and res.lam == 2 and res.families
    assert all(verify_sedf(F).ok for F in res.family_objects())


def test_worker_count_does_not_change_results():
    one = exhaustive_sedf(SearchConfig(cyclic(13), 2, 6, workers=1))
    two = exhaustive_sedf(SearchConfig(cyclic(13), 2, 6, workers=2))
    assert one.families == two.families and one.nodes == two.nodes


def test_budget_exhaustion_is_reported():
    res = exhaustive_sedf(SearchConfig(cyclic(13), 2, 6, budget=50))
    assert not res.exhaustive


def test_pds_census_f13():
    cen = pds_census(field(13))
    c0, c1 = build_cyclotomy(field(13), 2).classes
    assert sorted(e.set.tolist() for e in cen.entries) == [c0.tolist(), c1.tolist()]
    assert all(e.pds_type is PdsType.PALEY_TYPE_I for e in cen.entries)
    assert cen.exhaustive and not cen.flagged


def test_pds_census_f9():
    cen = pds_census(field(9))
    assert cen.entries
    assert all(e.params.astuple() == (9, 4, 1, 2) for e in cen.entries)
    assert all(e.pds_type is PdsType.PALEY_TYPE_I for e in cen.entries)


def test_pds_census_class_mode_243():
    cen = pds_census(field(243), mode="classes", e=11)
    assert len(cen.entries) == 11
    assert all(e.params.astuple() == (243, 22, 1, 2) and e.pds_type is PdsType.TYPE_243
               for e in cen.entries)


def test_ds_census_small_groups():
    cen = ds_census(cyclic(7))
    assert sorted(e.set.tolist() for e in cen.entries) == [[0, 1, 3], [0, 1, 5]]
    cen = ds_census(cyclic(13))
    assert {e.params.astuple() for e in cen.entries} == {(13, 4, 1)}
    assert ds_census(cyclic(16)).entries == []
    assert {e.params.astuple() for e in ds_census(field(16)).entries} == {(16, 6, 2)}
