import json

import pytest
from hypothesis import given, settings, strategies as st

from ordercomplete.errors import GapError, PrecisionError
from ordercomplete.exact import QQ, Poly
from ordercomplete.qseries import LaurentSeries, series_mul
from ordercomplete.reduce import (
    Decomposition,
    check_congruence,
    closed_form,
    decompose,
    express,
    verify_identity,
)

from oracles import partition_count, partitions

WINDOW = 30


@pytest.fixture(scope="module")
def hi(ex1):
    """Example 1 basis and t re-expanded far enough for WINDOW."""
    T = WINDOW + 12
    return ex1.ocb.reexpand(ex1.ctx, T), ex1.ctx.t(T)


@pytest.fixture(scope="module")
def h_dec(ex1):
    return decompose(ex1.h, ex1.ocb, ex1.ctx, 100)


@pytest.fixture(scope="module")
def reference_identity(ex1):
    K = ex1.field
    t, f = K.x(), K.y()
    return 14641 + t * 55 * (
        5 * (t - 1331) / (f + t * 47) - 2 * (t * 71 + f * 3) * (t + 1331) / (f * f + f * t * 89 + t * t * 1424)
    )


def test_h_decomposition(ex1, h_dec):
    dec, basis = h_dec
    assert dec.by_order(basis) == {4: Poly.const(11), 3: Poly.const(165), 2: Poly.const(748), 0: Poly.const(3553)}
    assert dec.certified_to >= 100


def test_h_closed_form_is_the_reference_identity(ex1, h_dec, reference_identity):
    dec, basis = h_dec
    assert closed_form(dec, basis) == reference_identity


def test_identity_through_q100(ex1, reference_identity):
    assert verify_identity(ex1.h, reference_identity, ex1.ctx, 100) >= 100


def test_perturbed_identity_fails(ex1, reference_identity):
    assert verify_identity(ex1.h, reference_identity + 1, ex1.ctx, 100) == 0


def test_round_trip_identity(ex1, reference_identity):
    s = ex1.ctx.expand(reference_identity, 40)
    assert verify_identity(s, reference_identity, ex1.ctx, 40) >= 40


def test_basis_series_are_fixed_points(hi):
    basis, ts = hi
    for k, e in enumerate(basis):
        dec = express(e.series, basis, ts, WINDOW)
        assert dec.terms == [(k, Poly.const(1))]
        assert closed_form(dec, basis) == e.expr


def test_t_times_b2(ex1, hi):
    basis, ts = hi
    k = basis.index_of_order(2)
    target = series_mul(ts, basis.entries[k].series)
    dec = express(target, basis, ts, WINDOW)
    assert dec.coefficient(k) == Poly.x()
    assert closed_form(dec, basis) == basis.entries[k].expr * Poly.x()


def test_constant(hi):
    basis, ts = hi
    dec = express(LaurentSeries.constant(5), basis, ts, WINDOW)
    assert dec.terms == [(0, Poly.const(5))]


def test_zero(ex1, hi):
    basis, ts = hi
    dec = express(LaurentSeries.zero(WINDOW), basis, ts, WINDOW)
    assert dec.terms == []
    assert closed_form(dec, basis).is_zero()


def test_gap(hi):
    basis, ts = hi
    # q^-1 is not reachable: 1 is a gap and t has pole order 5
    with pytest.raises(GapError):
        express(LaurentSeries.from_dict({-1: 1}, WINDOW), basis, ts, WINDOW)


def test_holomorphic_remainder_is_a_gap(hi):
    basis, ts = hi
    with pytest.raises(GapError):
        express(LaurentSeries.from_dict({3: 1}, WINDOW), basis, ts, WINDOW)


def test_short_window(hi):
    basis, ts = hi
    with pytest.raises(PrecisionError):
        express(basis.entries[2].series.truncate(5), basis, ts, WINDOW)


def test_uniqueness_across_precision(ex1, h_dec):
    dec, _ = h_dec
    lo, basis = decompose(ex1.h, ex1.ocb, ex1.ctx, 20)
    assert lo.terms == dec.terms


def test_round_trip_through_closed_form(ex1, hi):
    basis, ts = hi
    target = series_mul(series_mul(ts, ts), basis.entries[3].series) - basis.entries[4].series * QQ("7/2")
    dec = express(target, basis, ts, WINDOW)
    again = express(ex1.ctx.expand(closed_form(dec, basis), WINDOW + 16), basis, ts, WINDOW)
    assert again.terms == dec.terms


small = st.fractions(min_value=-20, max_value=20, max_denominator=5).map(QQ)


@settings(max_examples=15, deadline=None)
@given(st.lists(small, min_size=5, max_size=5), st.lists(small, min_size=5, max_size=5), small, small)
def test_linearity(hi, u, v, alpha, beta):
    basis, ts = hi

    def combo(cs):
        acc = LaurentSeries.zero(WINDOW + 12)
        for k, c in enumerate(cs):
            shifted = series_mul(ts, basis.entries[k].series) if k % 2 else basis.entries[k].series
            acc = acc + shifted * c
        return acc

    s1, s2 = combo(u), combo(v)
    d1 = express(s1, basis, ts, WINDOW)
    d2 = express(s2, basis, ts, WINDOW)
    d = express(s1 * alpha + s2 * beta, basis, ts, WINDOW)
    for k in range(len(basis)):
        assert d.coefficient(k) == d1.coefficient(k) * alpha + d2.coefficient(k) * beta


def test_json_shape(h_dec):
    dec, basis = h_dec
    data = json.loads(json.dumps(dec.to_json(basis)))
    assert [t["order"] for t in data["terms"]] == [4, 3, 2, 0]
    assert data["terms"][0]["coefficient"] == "11"


def test_congruence():
    assert check_congruence(11, 6, 11, 200) == []
    assert check_congruence(11, 5, 11, 10) != []
    assert 0 in check_congruence(11, 5, 11, 10)


def test_partition_oracle():
    assert partition_count(6) == 11
    assert partition_count(5) == 7
    assert len(set(partitions(6))) == 11


def test_h_coefficients_vanish_mod_11(ex1):
    s = ex1.h.series(200)
    assert all(int(c) % 11 == 0 for c in s.coefficients(s.valuation, 200))


def test_decomposition_default_certification(ex1):
    dec = Decomposition([], 50, 50)
    assert dec.coefficient(3) == Poly()
