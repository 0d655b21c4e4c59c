"""Writing a target q-series as sum_k p_k(t) * b_k over an order-complete basis."""

from __future__ import annotations

from dataclasses import dataclass

from .basis_rr import OrderCompleteBasis
from .errors import GapError, PrecisionError
from .exact import Poly, format_poly, format_rational
from .funcfield import FieldElement, SeriesContext
from .qseries import LaurentSeries, partition_numbers, series_mul, series_pow

DEFAULT_WINDOW = 50


@dataclass
class Decomposition:
    # (index into the basis entries, coefficient polynomial in t)
    terms: list
    residual_valuation: int
    certified_to: int

    def coefficient(self, index: int) -> Poly:
        for k, c in self.terms:
            if k == index:
                return c
        return Poly()

    def by_order(self, ocb: OrderCompleteBasis) -> dict:
        return {ocb.entries[k].pole_order: c for k, c in self.terms}

    def to_json(self, ocb: OrderCompleteBasis) -> dict:
        return {
            "terms": [
                {
                    "order": ocb.entries[k].pole_order,
                    "coefficient": format_poly(c, "t"),
                    "coefficients": [format_rational(v) for v in c.coeffs],
                }
                for k, c in sorted(self.terms, key=lambda kc: -ocb.entries[kc[0]].pole_order)
            ],
            "residual_valuation": self.residual_valuation,
            "certified_to": self.certified_to,
        }


def _leading(s: LaurentSeries):
    return s[s.valuation]


def express(target: LaurentSeries, ocb: OrderCompleteBasis, ts: LaurentSeries, window: int = DEFAULT_WINDOW) -> Decomposition:
    """Greedy reduction of ``target`` by t^k * b_i, certified through O(q^window).

    Each step removes the current leading pole q^-P using the entry of largest
    order o_i with P = k * pole(t) + o_i, k >= 0.  Raises GapError when no such
    entry exists or when a nonzero remainder without poles is left over, and
    PrecisionError when the inputs do not reach O(q^window).
    """
    n = -ts.valuation
    if n <= 0:
        raise ValueError("t must have a pole at the cusp")
    orders = [e.pole_order for e in ocb.entries]
    coeffs = {}
    powers = {}
    work = target
    while not work.is_zero() and work.valuation <= 0:
        P = -work.valuation
        choice = None
        for i in sorted(range(len(orders)), key=lambda i: -orders[i]):
            if orders[i] <= P and (P - orders[i]) % n == 0:
                choice = i
                break
        if choice is None:
            raise GapError(f"pole order {P} is not of the form k*{n} + o with o in {sorted(orders)}")
        k = (P - orders[choice]) // n
        if k not in powers:
            powers[k] = series_pow(ts, k) if k else LaurentSeries.constant(1)
        piece = series_mul(powers[k], ocb.entries[choice].series)
        c = _leading(work) / _leading(piece)
        work = work - piece * c
        coeffs[choice] = coeffs.get(choice, Poly()) + Poly.monomial(k, c)
    reach = work.trunc
    if reach is not None and reach < window:
        raise PrecisionError(f"remainder known only to O(q^{reach}); O(q^{window}) requested")
    if not work.is_zero():
        raise GapError(
            f"nonzero remainder starting at q^{work.valuation}: the target is not in the span of the basis"
        )
    terms = [(k, c) for k, c in sorted(coeffs.items()) if c]
    certified = reach if reach is not None else window
    return Decomposition(terms, certified, certified)


def closed_form(dec: Decomposition, ocb: OrderCompleteBasis, field=None) -> FieldElement:
    acc = None
    for k, c in dec.terms:
        term = ocb.entries[k].expr * c
        acc = term if acc is None else acc + term
    if acc is None:
        if field is None:
            field = ocb.entries[0].expr.field
        return field.zero()
    return acc


def decompose(target_source, ocb: OrderCompleteBasis, ctx: SeriesContext, window: int = DEFAULT_WINDOW):
    """express() with every series expanded far enough for ``window``.

    ``target_source`` is a recipe (anything with ``series(T)``) or a fixed
    LaurentSeries.  Returns the decomposition and the re-expanded basis.
    """
    probe = target_source if isinstance(target_source, LaurentSeries) else target_source.series(1)
    pole = max(-probe.valuation, 0)
    n = -ctx.t(1).valuation
    kmax = pole // n + 1
    T = window + kmax * n + 1
    target = target_source if isinstance(target_source, LaurentSeries) else target_source.series(T)
    basis = ocb.reexpand(ctx, T)
    return express(target, basis, ctx.t(T), window), basis


def verify_identity(lhs, rhs: FieldElement, ctx: SeriesContext, T: int) -> int:
    """Valuation of lhs - rhs through O(q^T); the identity holds iff this is >= T."""
    if T < 1:
        raise ValueError("T must be at least 1")
    left = lhs.truncate(T) if isinstance(lhs, LaurentSeries) else lhs.series(T)
    right = ctx.expand(rhs, T)
    diff = left - right
    return diff.valuation if not diff.is_zero() else diff.trunc


def check_congruence(a: int, b: int, m: int, count: int):
    """All n in [0, count) with p(a*n + b) not divisible by m."""
    if a < 1 or m < 2:
        raise ValueError("need a >= 1 and m >= 2")
    if count <= 0:
        return []
    p = partition_numbers(a * (count - 1) + b + 1)
    return [k for k in range(count) if a * k + b >= 0 and p[a * k + b] % m]
