import math
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from tropconv.exceptions import DomainError
from tropconv.services.numerics import (
    ApproxFloat,
    RankTable,
    ceil_log2,
    floor_log,
    floor_log2,
)
from tropconv.services.setfunction import INF, SetFunction

rationals = st.fractions(min_value=0, max_value=10 ** 30)
positive = st.fractions(min_value=Fraction(1, 10 ** 12), max_value=10 ** 30)


@given(rationals)
@settings(max_examples=300)
def test_from_rational_never_rounds_down(x):
    a = ApproxFloat.from_rational(x)
    assert a >= x
    # one unit in the last place at most
    assert a.to_fraction() - x <= x / 2 ** 62


@given(rationals, rationals)
@settings(max_examples=300)
def test_comparison_is_exact_on_exact_values(x, y):
    a = ApproxFloat.from_rational(x)
    b = ApproxFloat.from_rational(y)
    fa, fb = a.to_fraction(), b.to_fraction()
    assert (a < b) == (fa < fb)
    assert (a == b) == (fa == fb)


@given(rationals, rationals)
@settings(max_examples=300)
def test_addition_rounds_up(x, y):
    total = ApproxFloat.from_rational(x) + ApproxFloat.from_rational(y)
    assert total >= x + y


@given(rationals, rationals)
@settings(max_examples=200)
def test_multiplication_rounds_up(x, y):
    product = ApproxFloat.from_rational(x) * ApproxFloat.from_rational(y)
    assert product >= x * y


def test_small_integers_are_exact():
    for v in (0, 1, 2, 3, 17, 34, 2 ** 63 - 1):
        assert ApproxFloat.from_rational(v).to_fraction() == v


def test_huge_powers_stay_representable():
    big = ApproxFloat.from_power(16, 10 ** 6)
    assert floor_log2(big) == 4 * 10 ** 6
    assert big.floor_log(16) == 10 ** 6
    assert float(big) == math.inf


def test_infinity_behaviour():
    inf = ApproxFloat.infinity()
    one = ApproxFloat.from_rational(1)
    assert inf > one and inf == math.inf
    assert one + INF == INF
    assert one < INF
    assert min(inf, one) == one
    with pytest.raises(DomainError):
        inf.to_fraction()


def test_mixed_arithmetic():
    a = ApproxFloat.from_rational(3)
    assert a + 2 == 5
    assert 2 + a == 5
    assert a * Fraction(1, 3) >= 1


def test_negative_values_rejected():
    with pytest.raises(DomainError):
        ApproxFloat.from_rational(-1)


@given(positive)
@settings(max_examples=300)
def test_floor_and_ceil_log2(x):
    k = floor_log2(x)
    assert Fraction(2) ** k <= x < Fraction(2) ** (k + 1)
    c = ceil_log2(x)
    assert Fraction(2) ** (c - 1) < x <= Fraction(2) ** c


@given(positive, st.integers(min_value=2, max_value=40))
@settings(max_examples=300)
def test_floor_log_any_base(x, base):
    k = floor_log(x, base)
    assert Fraction(base) ** k <= x < Fraction(base) ** (k + 1)


def test_floor_log_at_exact_powers():
    assert floor_log(16, 16) == 1
    assert floor_log(15, 16) == 0
    assert floor_log(ApproxFloat.from_power(16, 5), 16) == 5
    with pytest.raises(DomainError):
        floor_log(0, 2)


def test_rank_table_is_dense_and_zero_based():
    f = SetFunction(1, [5, INF])
    g = SetFunction(1, [Fraction(5), 2])
    table = RankTable.from_functions(f, g)
    assert len(table) == 2
    assert table.encode(f).tolist() == [1, INF]
    assert table.encode(g).tolist() == [1, 0]
    assert table.decode(table.encode(g)).tolist() == [5, 2]


def test_rank_table_unknown_value():
    with pytest.raises(DomainError):
        RankTable([1, 2]).rank(3)
