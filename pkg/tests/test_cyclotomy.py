import numpy as np
import pytest

import oracles
from sedf.cyclotomy import (
    audit_identities,
    build_cyclotomy,
    cyclotomic_number,
    delta_classes,
    is_semiprimitive,
    semiprimitive_eta,
    semiprimitive_numbers,
    semiprimitive_orders,
)
from sedf.designs import delta
from sedf.errors import NotAField, NotSemiprimitive, OddDegree, OrderDoesNotDivide
from sedf.groups import cyclic, field


def test_squares_mod_13():
    sys = build_cyclotomy(field(13), 2)
    assert sys.classes[0].tolist() == [1, 3, 4, 9, 10, 12]
    assert sys.classes[1].tolist() == [2, 5, 6, 7, 8, 11]


def test_quartic_classes_of_f9():
    sys = build_cyclotomy(field(9), 4)
    assert [c.tolist() for c in sys.classes] == [[1, 2], [4, 8], [3, 6], [5, 7]]


def test_order_q_minus_one_gives_singletons():
    sys = build_cyclotomy(field(16), 15)
    assert all(c.k == 1 for c in sys.classes) and sys.f == 1


@pytest.mark.parametrize("p,e", [(7, 2), (13, 3), (13, 4), (31, 5), (37, 4), (41, 8), (73, 8), (61, 6)])
def test_numbers_match_sympy_logs(p, e):
    cls = oracles.prime_field_classes(p, e)
    want = oracles.cyclotomic_table(range(1, p), lambda x: (x + 1) % p, cls, e)
    sys = build_cyclotomy(field(p), e)
    assert sys.numbers.tolist() == want
    assert all(sys.class_of[x] == cls[x] for x in range(1, p))


@pytest.mark.parametrize("q,e", [(9, 4), (16, 5), (25, 3), (27, 13), (64, 7)])
def test_numbers_match_polynomial_oracle(q, e):
    g = field(q)
    p, m = g.p, g.m
    mod = list(g.modulus)
    cls, x = {}, 1
    for i in range(q - 1):
        cls[x] = i % e
        x = oracles.field_mul(x, g.theta, p, mod)
    want = oracles.cyclotomic_table(range(1, q), lambda y: oracles.field_add(y, 1, p, m), cls, e)
    sys = build_cyclotomy(g, e)
    assert sys.numbers.tolist() == want
    for i in range(e):
        for j in range(e):
            assert cyclotomic_number(sys, i, j) == want[i][j]


def test_classical_order_two_values():
    for q in (13, 17, 29, 25, 49):
        sys = build_cyclotomy(field(q), 2)
        a = (q - 5) // 4
        b = (q - 1) // 4
        assert sys.numbers.tolist() == [[a, b], [b, b]]
    for q in (7, 11, 19, 27):
        sys = build_cyclotomy(field(q), 2)
        a = (q - 3) // 4
        assert sys.numbers.tolist() == [[a, (q + 1) // 4], [a, a]]


def test_semiprimitive_examples():
    t = semiprimitive_numbers(3, 2, 4)  # eta = -1
    assert semiprimitive_eta(3, 2, 4) == -1
    assert t[0, 0] == 1
    assert all(t[0, i] == t[i, 0] == t[i, i] == 0 for i in range(1, 4))
    assert all(t[i, j] == 1 for i in range(1, 4) for j in range(1, 4) if i != j)

    t = semiprimitive_numbers(5, 2, 3)  # eta = -2
    assert t.tolist() == [[3, 2, 2], [2, 2, 4], [2, 4, 2]]
    assert t.tolist() == build_cyclotomy(field(25), 3).numbers.tolist()

    t = semiprimitive_numbers(2, 4, 3)  # eta = 1
    assert t.tolist() == [[0, 2, 2], [2, 2, 1], [2, 1, 2]]
    assert t.tolist() == build_cyclotomy(field(16), 3).numbers.tolist()


def test_semiprimitive_errors():
    assert not is_semiprimitive(2, 7)
    with pytest.raises(NotSemiprimitive):
        semiprimitive_eta(2, 6, 7)
    with pytest.raises(OrderDoesNotDivide):
        semiprimitive_eta(2, 4, 9)  # 2^3 = -1 mod 9, but 9 does not divide 15
    with pytest.raises(OddDegree):
        semiprimitive_eta(3, 3, 2)
    assert semiprimitive_orders(16) == [3, 5]  # powers of 2 mod 15 never reach -1


def test_build_errors():
    with pytest.raises(NotAField):
        build_cyclotomy(cyclic(13), 2)
    with pytest.raises(OrderDoesNotDivide):
        build_cyclotomy(field(13), 5)


def test_class_of_minus_one():
    assert build_cyclotomy(field(7), 2).class_of_minus_one() == 1
    assert build_cyclotomy(field(13), 2).class_of_minus_one() == 0
    assert build_cyclotomy(field(9), 4).class_of_minus_one() == 0


def test_row_sums_drop_the_class_of_minus_one():
    # F_7: -1 = 6 is a non-square, so the row of C_1 loses one element
    sys = build_cyclotomy(field(7), 2)
    assert sys.numbers.sum(axis=1).tolist() == [3, 2]
    sys = build_cyclotomy(field(13), 2)
    assert sys.numbers.sum(axis=1).tolist() == [5, 6]


@pytest.mark.parametrize("q,e", [(13, 2), (7, 2), (9, 4), (37, 4), (64, 9), (81, 5)])
def test_audit_passes(q, e):
    rep = audit_identities(build_cyclotomy(field(q), e))
    assert rep.ok, [c for c in rep.checks if not c.ok]
    assert [c.name for c in rep.checks] == [
        "symmetries", "class_of_minus_one", "transpose_rule", "row_sums", "class_difference_expansion"]


def test_audit_records_swapped_row_sum_rule():
    rep = audit_identities(build_cyclotomy(field(7), 2))
    assert rep.refuted


def test_audit_catches_a_corrupted_table():
    sys = build_cyclotomy(field(13), 4)
    bad = sys.numbers.copy()
    bad[1, 2] += 1
    sys.numbers = bad
    rep = audit_identities(sys)
    assert not rep.ok


@pytest.mark.parametrize("q,e", [(13, 3), (16, 5), (25, 4), (49, 6)])
def test_class_expansion_matches_direct_delta(q, e):
    sys = build_cyclotomy(field(q), e)
    for i in range(e):
        for j in range(e):
            assert delta_classes(sys, i, j) == delta(sys.classes[i], sys.classes[j])
    assert np.array_equal(delta_classes(sys, 0, 0).counts[:1], [sys.f])
