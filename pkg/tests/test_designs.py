import numpy as np
import pytest

import oracles
from sedf.cyclotomy import build_cyclotomy
from sedf.designs import (
    Family,
    PdsType,
    check_partition_characterisation,
    classify_pds_type,
    complement_ds,
    complement_pds,
    delta,
    difference_counts,
    feasibility,
    verify_bgsedf,
    verify_ds,
    verify_gsedf,
    verify_pds,
    verify_sedf,
    DsParams,
    PdsParams,
)
from sedf.errors import DegenerateSet, NotAPartition, NotADs, NotSymmetric, ZeroInSet
from sedf.groups import ElementSet, cyclic, field


def classes(q, e):
    return build_cyclotomy(field(q), e).classes


def test_delta_singleton_identity():
    g = cyclic(13)
    z = ElementSet.of(g, [0])
    d = delta(z, z)
    assert d[0] == 1 and d.total == 1


def test_delta_f9_single_pair():
    g = field(9)
    d = delta(ElementSet.of(g, [1]), ElementSet.of(g, [4]))
    assert d.as_dict() == {6: 1}  # 1 - (x+1) = 2x


def test_delta_of_squares_mod_13():
    c0, c1 = classes(13, 2)
    d = delta(c0, c0)
    assert d[0] == 6
    assert all(d[g] == 2 for g in c0) and all(d[g] == 3 for g in c1)


def test_delta_orientation_is_first_minus_second():
    g = cyclic(11)
    d = delta(ElementSet.of(g, [5]), ElementSet.of(g, [2]))
    assert d.as_dict() == {3: 1}


@pytest.mark.parametrize("g", [cyclic(30), field(27), field(32)])
def test_delta_matches_pair_enumeration(g):
    rng = np.random.default_rng(5)
    for _ in range(20):
        a = rng.choice(g.n, size=rng.integers(1, g.n), replace=False)
        b = rng.choice(g.n, size=rng.integers(1, g.n), replace=False)
        want = oracles.differences(a.tolist(), b.tolist(), g.sub)
        got = delta(ElementSet.of(g, a), ElementSet.of(g, b)).as_dict()
        assert got == want


def test_fft_path_equals_direct_path():
    g = field(3**7)
    rng = np.random.default_rng(2)
    a = np.bincount(rng.choice(g.n, 900, replace=False), minlength=g.n)
    b = np.bincount(rng.choice(g.n, 1300, replace=False), minlength=g.n)
    direct = difference_counts(g, a, b, method="direct")
    fft = difference_counts(g, a, b, method="fft")
    assert np.array_equal(direct, fft)
    assert direct.sum() == 900 * 1300
    weighted = rng.integers(0, 4, g.n)
    assert np.array_equal(difference_counts(g, weighted, b, method="fft"),
                          difference_counts(g, weighted, b, method="direct"))


def test_verify_ds_examples():
    assert verify_ds(ElementSet.of(cyclic(13), [0, 1, 3, 9])) == DsParams(13, 4, 1)
    assert verify_ds(classes(7, 2)[0]) == DsParams(7, 3, 1)
    assert verify_ds(ElementSet.of(cyclic(8), [0, 1])) is None
    with pytest.raises(DegenerateSet):
        verify_ds(ElementSet.empty(cyclic(5)))


def test_verify_pds_examples():
    c0 = classes(13, 2)[0]
    assert verify_pds(c0) == PdsParams(13, 6, 2, 3)
    assert verify_pds(classes(243, 11)[0]) == PdsParams(243, 22, 1, 2)
    assert verify_pds(c0 | ElementSet.of(c0.group, [2])) is None
    with pytest.raises(ZeroInSet):
        verify_pds(c0.with_zero())


def test_sedf_examples():
    f13 = Family.of(field(13), classes(13, 2))
    rep = verify_sedf(f13)
    assert rep.ok and rep.params.astuple() == (13, 2, 6, 3)
    rep = verify_sedf(Family.of(field(243), classes(243, 11)))
    assert rep.ok and rep.params.astuple() == (243, 11, 22, 20)


def test_gsedf_with_zero_adjoined():
    c0, c1 = classes(7, 2)
    rep = verify_gsedf(Family.of(field(7), [c0, c1.with_zero()]))
    assert rep.ok
    assert rep.params.astuple() == (7, 2, (3, 4), (2, 2))
    assert not verify_sedf(Family.of(field(7), [c0, c1.with_zero()])).ok


def test_all_singletons_form_trivial_sedf():
    g = cyclic(9)
    rep = verify_sedf(Family.of(g, [[x] for x in range(9)]))
    assert rep.ok and rep.params.astuple() == (9, 9, 1, 1)


def test_failure_reports_counterexample_and_overlap():
    g = cyclic(10)
    rep = verify_gsedf(Family.of(g, [[0, 1], [2, 3]]))
    assert not rep.ok and rep.counterexample is not None and rep.reason
    rep = verify_gsedf(Family.of(g, [[0, 1], [1, 3]]))
    assert not rep.ok and "1" in rep.reason


def test_bgsedf_examples():
    c = classes(9, 4)
    g = c[0].group
    rep = verify_bgsedf(Family.of(g, [[1], [4]]), (1, 1))
    assert rep.ok and rep.achieved == (1, 1) and rep.zero_coeffs == (0, 0)
    rep = verify_bgsedf(Family.of(g, [c[0], c[1]]))
    assert rep.ok and rep.achieved == (1, 1)
    c13 = classes(13, 2)
    rep = verify_bgsedf(Family.of(field(13), c13), (2, 2))
    assert not rep.ok and rep.achieved == (3, 3)


def test_complement_ds_examples():
    comp = complement_ds(ElementSet.of(cyclic(13), [0, 1, 3, 9]))
    assert comp.predicted == DsParams(13, 9, 6) and comp.agrees
    comp = complement_ds(classes(7, 2)[0])
    assert comp.verified == DsParams(7, 4, 2)
    with pytest.raises(DegenerateSet):
        complement_ds(ElementSet.whole(cyclic(5)))
    with pytest.raises(NotADs):
        complement_ds(ElementSet.of(cyclic(8), [0, 1]))


def test_complement_pds_examples():
    c13 = classes(13, 2)
    comp = complement_pds(c13[0])
    assert comp.set == c13[1] and comp.predicted == PdsParams(13, 6, 2, 3) and comp.agrees
    comp = complement_pds(classes(243, 11)[0])
    assert comp.verified == PdsParams(243, 220, 199, 200) and comp.agrees
    comp = complement_pds(classes(17, 2)[0])
    assert comp.verified == PdsParams(17, 8, 3, 4)
    # {1, 2, 4} in Z_7 is a PDS (lambda = mu = 1) but not symmetric
    g = cyclic(7)
    with pytest.raises(NotSymmetric):
        complement_pds(ElementSet.of(g, [1, 2, 4]))


def test_partition_checks_on_known_families():
    rep = check_partition_characterisation(Family.of(field(13), classes(13, 2)))
    assert rep.case == "partition-of-G-minus-0" and rep.agree and rep.gsedf.ok and rep.sets_ok
    g = cyclic(7)
    rep = check_partition_characterisation(Family.of(g, [[1, 2, 4], [0, 3, 5, 6]]))
    assert rep.case == "partition-of-G" and rep.agree and rep.gsedf.ok
    rep = check_partition_characterisation(Family.of(g, [[0, 1], [2, 3, 4, 5, 6]]))
    assert rep.agree and not rep.gsedf.ok and not rep.sets_ok
    with pytest.raises(NotAPartition):
        check_partition_characterisation(Family.of(g, [[0, 1], [2, 3]]))


def test_feasibility_examples():
    assert feasibility(243, 11, 22) == 20
    assert feasibility(13, 2, 6) == 3
    assert feasibility(16, 3, 4) is None
    assert feasibility(21, 3, 2) is None
    assert feasibility(7, 2, (3, 4)) == (2, 2)


def test_pds_type_classification():
    assert classify_pds_type(PdsParams(13, 6, 2, 3)) is PdsType.PALEY_TYPE_I
    assert classify_pds_type(PdsParams(243, 22, 1, 2)) is PdsType.TYPE_243
    assert classify_pds_type(PdsParams(13, 6, 2, 4)) is PdsType.OTHER
