import numpy as np
import pytest

import oracles
from sedf.errors import NotPrime, NotPrimitive, OrderTooLarge, ReducibleModulus, ZeroInverse
from sedf.groups import ElementSet, GroupSpec, build_group, cyclic, field, parse_group

SMALL_FIELDS = [(2, 1), (3, 1), (13, 1), (2, 3), (2, 4), (3, 2), (3, 3), (5, 2), (7, 2)]


def test_f3_generator_is_two():
    g = field(3)
    assert g.theta == 2
    assert list(g.modulus) == [0, 1]


def test_f9_modulus_and_generator():
    g = field(9)
    assert list(g.modulus) == [1, 0, 1]  # x^2 + 1
    assert g.theta == 4  # x + 1
    assert g.mult_order(2) == 2 and g.mult_order(3) == 4


def test_f13_antilog_prefix():
    g = field(13)
    assert g.theta == 2
    assert g.antilog[1] == 2 and g.antilog[2] == 4


@pytest.mark.parametrize("p,m", SMALL_FIELDS)
def test_canonical_choices_match_brute_force(p, m):
    g = build_group(GroupSpec.field(p, m))
    mod = oracles.first_irreducible(p, m) if m > 1 else [0, 1]
    assert list(g.modulus) == mod
    if p**m > 2:
        assert g.theta == oracles.least_primitive(p, mod)


@pytest.mark.parametrize("p,m", SMALL_FIELDS)
def test_arithmetic_matches_polynomial_oracle(p, m):
    g = build_group(GroupSpec.field(p, m))
    q = p**m
    mod = list(g.modulus)
    for x in range(q):
        for y in range(q):
            if m > 1:
                assert g.mul(x, y) == oracles.field_mul(x, y, p, mod)
            else:
                assert g.mul(x, y) == x * y % p
            assert g.add(x, y) == oracles.field_add(x, y, p, m)
            assert g.sub(x, y) == oracles.field_sub(x, y, p, m)


@pytest.mark.parametrize("p,m", SMALL_FIELDS)
def test_log_tables_are_inverse_bijections(p, m):
    g = build_group(GroupSpec.field(p, m))
    q = p**m
    assert sorted(g.antilog.tolist()) == list(range(1, q))
    assert all(g.log[g.antilog[i]] == i for i in range(q - 1))
    assert g.log[0] == -1


def test_inverse_and_zero_inverse():
    g = field(27)
    for x in range(1, 27):
        assert g.mul(x, g.inv(x)) == 1
    with pytest.raises(ZeroInverse):
        g.inv(0)
    with pytest.raises(ZeroDivisionError):
        g.inv(0)


def test_power_agrees_with_repeated_multiplication():
    g = field(25)
    x, acc = 7, 1
    for e in range(30):
        assert g.power(x, e) == acc
        acc = g.mul(acc, x)


def test_construction_errors(monkeypatch):
    with pytest.raises(NotPrime):
        build_group(GroupSpec.field(4, 1))
    with pytest.raises(NotPrime):
        field(12)
    with pytest.raises(ReducibleModulus):
        build_group(GroupSpec.field(5, 2), modulus_override=[1, 0, 1])  # 2^2 = -1 mod 5
    with pytest.raises(NotPrimitive):
        build_group(GroupSpec.field(3, 2), theta_override=3)
    monkeypatch.setenv("SEDF_ORDER_CAP", "100")
    with pytest.raises(OrderTooLarge):
        field(101)
    with pytest.raises(OrderTooLarge):
        cyclic(128)


def test_overrides_are_honoured():
    g = build_group(GroupSpec.field(3, 2), modulus_override=[2, 2, 1], theta_override=3)
    assert list(g.modulus) == [2, 2, 1]
    assert g.theta == 3 and g.mult_order(3) == 8


def test_cyclic_group_is_integers_mod_n():
    g = cyclic(12)
    assert g.add(7, 9) == 4 and g.sub(3, 5) == 10 and g.neg(0) == 0
    assert not g.is_field


def test_vector_ops_match_scalar_ops():
    for g in (cyclic(10), field(8), field(9), field(49)):
        xs = np.arange(g.n)
        for b in range(g.n):
            assert g.add_vec(xs, b).tolist() == [g.add(x, b) for x in xs]
            assert g.sub_vec(b, xs).tolist() == [g.sub(b, x) for x in xs]
        tab = g.subtraction_table()
        assert all(tab[a][b] == g.sub(a, b) for a in range(g.n) for b in range(g.n))


def test_parse_group_forms():
    assert parse_group("Z13").descriptor() == {"kind": "cyclic", "n": 13}
    assert parse_group("F9") == field(9)
    assert parse_group("F3^5").n == 243
    assert parse_group('{"kind": "field", "p": 3, "m": 2}') == field(9)


def test_element_set_operations():
    g = cyclic(10)
    a = ElementSet.of(g, [1, 2, 3])
    b = ElementSet.of(g, [3, 4])
    assert (a | b).tolist() == [1, 2, 3, 4]
    assert (a & b).tolist() == [3]
    assert (a - b).tolist() == [1, 2]
    assert a.complement().k == 7
    assert a.translate(8).tolist() == [0, 1, 9]
    assert a.negate().tolist() == [7, 8, 9]
    assert ElementSet.of(g, [1, 9]).is_symmetric()
    assert a.with_zero().tolist() == [0, 1, 2, 3]
    assert not a.isdisjoint(b) and ElementSet.of(g, [1]).issubset(a)
    assert ElementSet.of(g, [3, 1, 2]) == a and hash(ElementSet.of(g, [3, 1, 2])) == hash(a)
