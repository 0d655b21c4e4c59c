import pytest
from hypothesis import given, settings, strategies as st

from ordercomplete.errors import SeriesDivisionError
from ordercomplete.exact import QQ
from ordercomplete.qseries import (
    LaurentSeries,
    delta_series,
    eisenstein_e4,
    euler_product,
    format_series,
    j_invariant,
    partition_numbers,
    partition_slice,
    pole_order,
    series_derivative,
    series_inv,
    series_mul,
    series_pow,
)

from oracles import naive_euler, naive_mul, partition_count, partitions, sigma

coef_lists = st.lists(st.integers(-30, 30), min_size=1, max_size=25)


def series(start, coeffs, trunc):
    return LaurentSeries(start, coeffs, trunc)


def test_brute_force_partition_oracle():
    assert partition_count(5) == 7
    assert partition_count(6) == 11
    assert sorted(partitions(4)) == [(1, 1, 1, 1), (2, 1, 1), (2, 2), (3, 1), (4,)]


def test_euler_product_examples():
    s = euler_product(1, 1, 6)
    assert s == series(0, [1, -1, -1, 0, 0, 1], 6)
    assert euler_product(7, 0, 10) == series(0, [1], 10)
    p = euler_product(1, -1, 8)
    assert [p[k] for k in range(8)] == [1, 1, 2, 3, 5, 7, 11, 15]


@pytest.mark.parametrize("delta,e", [(1, 1), (1, -1), (1, 12), (11, -12), (2, -3), (3, 5), (1, 24)])
def test_euler_product_matches_naive(delta, e):
    T = 60
    s = euler_product(delta, e, T)
    assert s.trunc == T
    assert [s[k] for k in range(T)] == naive_euler(delta, e, T)


@pytest.mark.parametrize("delta,e", [(1, 1), (11, 2), (3, -4)])
def test_euler_product_reciprocal(delta, e):
    prod = euler_product(delta, e, 80) * euler_product(delta, -e, 80)
    assert prod == series(0, [1], 80)


def test_partition_numbers_against_enumeration():
    p = partition_numbers(26)
    assert list(p) == [partition_count(n) for n in range(26)]


def test_partition_slice():
    s = partition_slice(11, 6, 3)
    assert [s[k] for k in range(3)] == [partition_count(6), partition_count(17), partition_count(28)]
    assert partition_slice(1, 0, 30) == euler_product(1, -1, 30)


def test_truncation_rules():
    a = series(-2, [1, 2, 3], 4)
    b = series(1, [5, 1], 6)
    prod = series_mul(a, b)
    assert prod.trunc == min(-2 + 6, 1 + 4)
    assert prod.valuation == -1
    assert (a + b).trunc == 4


def test_inverse_and_derivative_examples():
    inv = series_inv(series(0, [1, -1], None), 4)
    assert inv == series(0, [1, 1, 1, 1], 4)
    assert series_derivative(LaurentSeries.monomial(-5)) == LaurentSeries.monomial(-6, -5)
    assert pole_order(LaurentSeries.constant(1)) == 0
    with pytest.raises(SeriesDivisionError):
        series_inv(LaurentSeries.zero(10))
    with pytest.raises(ValueError):
        pole_order(LaurentSeries.zero(5))


@settings(max_examples=80, deadline=None)
@given(st.integers(-6, 6), coef_lists.filter(lambda c: c[0]), st.integers(-6, 6), coef_lists)
def test_inverse_round_trip(v, coeffs, w, other):
    T = v + len(coeffs)
    s = series(v, coeffs, T)
    inv = series_inv(s)
    assert inv.trunc == T - 2 * v
    one = series_mul(s, inv)
    assert one.truncate(one.trunc) == series(0, [1], one.trunc)
    # sparse and Newton paths agree
    dense = series(v, coeffs + [1] * 200, T + 200)
    assert series_inv(dense).truncate(inv.trunc) == inv


@settings(max_examples=60, deadline=None)
@given(coef_lists, coef_lists, st.integers(-5, 5), st.integers(-5, 5))
def test_mul_matches_naive(a, b, va, vb):
    n = min(len(a), len(b))
    s = series_mul(series(va, a[:n], va + n), series(vb, b[:n], vb + n))
    ref = naive_mul(a[:n], b[:n], n)
    for k in range(n):
        if va + vb + k < s.trunc:
            assert s[va + vb + k] == ref[k]


@settings(max_examples=40, deadline=None)
@given(coef_lists.filter(lambda c: c[0]), st.integers(-3, 3), st.integers(-4, 4))
def test_pow_matches_repeated_mul(coeffs, v, k):
    s = series(v, coeffs, v + len(coeffs))
    got = series_pow(s, k)
    ref = LaurentSeries.constant(1)
    base = s if k >= 0 else series_inv(s)
    for _ in range(abs(k)):
        ref = series_mul(ref, base)
    assert got.agrees_with(ref)
    if k > 0:
        assert got.trunc == s.trunc + (k - 1) * v
    if k == 0:
        assert got == LaurentSeries.constant(1)


def test_e4_delta_j_against_divisor_sums():
    T = 15
    e4 = eisenstein_e4(T)
    assert [e4[k] for k in range(1, T)] == [240 * sigma(3, k) for k in range(1, T)]
    d = delta_series(T)
    assert [d[k] for k in range(1, 6)] == [1, -24, 252, -1472, 4830]
    j = j_invariant(4)
    assert [j[k] for k in range(-1, 4)] == [1, 744, 196884, 21493760, 864299970]


def test_j_is_e4_cubed_over_delta():
    T = 30
    lhs = series_mul(j_invariant(T), delta_series(T + 1))
    e4 = eisenstein_e4(T)
    rhs = series_mul(series_mul(e4, e4), e4)
    assert lhs.truncate(T) == rhs.truncate(T)


def test_format_series():
    s = series(-2, [1, -12, 0, QQ(1) / 2], 3)
    assert format_series(s) == "q^-2 - 12*q^-1 + 1/2*q + O(q^3)"
    assert format_series(LaurentSeries.zero(5)) == "O(q^5)"
    assert str(LaurentSeries.constant(3)) == "3"


def test_indexing_beyond_precision():
    s = series(0, [1, 2], 2)
    assert s[-3] == 0
    with pytest.raises(IndexError):
        s[2]


def test_truncate_cannot_raise_precision():
    with pytest.raises(ValueError):
        series(0, [1], 3).truncate(5)
