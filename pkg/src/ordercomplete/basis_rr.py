"""Order-complete bases of the Riemann-Roch spaces O_K ∩ x^d O_inf.

B_d collects x^j b_i for 0 <= j <= d - d_i.  Reducing the q-expansions of B_d
to reduced echelon form gives one basis element per attained pole order, each
of the shape q^-r + (terms at non-attained orders) + O(q).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .errors import InternalContractViolation
from .exact import ONE, QQ, Poly, RatFunc, format_rational, rref
from .funcfield import FieldElement, FunctionField, SeriesContext
from .normalize import NormalizedBasis
from .qseries import LaurentSeries


@dataclass
class Entry:
    pole_order: int
    expr: FieldElement
    series: LaurentSeries


@dataclass
class OrderCompleteBasis:
    entries: list
    d_used: int
    gaps: set = field(default_factory=set)

    def __len__(self):
        return len(self.entries)

    def __iter__(self):
        return iter(self.entries)

    @property
    def orders(self):
        return [e.pole_order for e in self.entries]

    @property
    def precision(self):
        return min((e.series.trunc for e in self.entries), default=None)

    def index_of_order(self, order: int) -> int:
        for k, e in enumerate(self.entries):
            if e.pole_order == order:
                return k
        raise KeyError(order)

    def reexpand(self, ctx: SeriesContext, T: int) -> OrderCompleteBasis:
        """Same expressions, series recomputed to O(q^T)."""
        entries = [Entry(e.pole_order, e.expr, ctx.expand(e.expr, T)) for e in self.entries]
        return OrderCompleteBasis(entries, self.d_used, set(self.gaps))

    def to_json(self, window: int = 3) -> dict:
        """Plain data; rationals as "num/den" strings.  Series are listed from
        the pole up to (excluding) q^window."""
        out = []
        for e in self.entries:
            stop = min(window, e.series.trunc)
            out.append(
                {
                    "order": e.pole_order,
                    "expr": str(e.expr),
                    "coords": element_to_json(e.expr),
                    "series_start": -e.pole_order,
                    "series": [format_rational(c) for c in e.series.coefficients(-e.pole_order, stop)],
                    "series_trunc": stop,
                }
            )
        return {"d": self.d_used, "gaps": sorted(self.gaps), "entries": out}

    @classmethod
    def from_json(cls, data: dict, field_: FunctionField) -> OrderCompleteBasis:
        entries = []
        for item in data["entries"]:
            series = LaurentSeries(item["series_start"], [QQ(c) for c in item["series"]], item["series_trunc"])
            entries.append(Entry(item["order"], element_from_json(item["coords"], field_), series))
        return cls(entries, data["d"], set(data["gaps"]))


def element_to_json(a: FieldElement):
    return [
        {"num": [format_rational(c) for c in r.num.coeffs], "den": [format_rational(c) for c in r.den.coeffs]}
        for r in a.coords
    ]


def element_from_json(data, field_: FunctionField) -> FieldElement:
    coords = [RatFunc(Poly([QQ(c) for c in r["num"]]), Poly([QQ(c) for c in r["den"]])) for r in data]
    return field_.element(coords)


def build_Bd(nb: NormalizedBasis, d: int):
    if d < 0:
        raise ValueError("d must be non-negative")
    out = []
    for b, di in zip(nb.b, nb.d):
        for j in range(d - di + 1):
            out.append(b * Poly.monomial(j) if j else b)
    return out


def ref_basis(elems, ctx: SeriesContext, T: int, d_used: int | None = None) -> OrderCompleteBasis:
    """Reduced echelon form of the q-expansions of ``elems``, to O(q^T)."""
    if not elems:
        return OrderCompleteBasis([], d_used or 0, set())
    if T < 1:
        raise ValueError("T must be at least 1")
    series = [ctx.expand(e, T) for e in elems]
    for k, s in enumerate(series):
        if s.is_zero():
            raise InternalContractViolation(f"element {k} expands to zero through O(q^{T})")
    order = sorted(range(len(elems)), key=lambda k: (series[k].valuation, k))
    lo = min(s.valuation for s in series)
    width = T - lo
    m = len(elems)
    rows = []
    for pos, k in enumerate(order):
        unit = [ONE if c == pos else QQ(0) for c in range(m)]
        rows.append(series[k].coefficients(lo, T) + unit)
    reduced, pivots = rref(rows)
    if len(pivots) < m or pivots[-1] >= width:
        raise InternalContractViolation("basis elements are linearly dependent through the working precision")
    entries = []
    for row, piv in zip(reduced, pivots):
        exponent = lo + piv
        if exponent > 0:
            raise InternalContractViolation(
                f"an echelon element starts at q^{exponent}; nonconstant and holomorphic at the cusp"
            )
        expr = None
        for pos, c in enumerate(row[width:]):
            if c:
                term = elems[order[pos]] * c
                expr = term if expr is None else expr + term
        entries.append(Entry(-exponent, expr, LaurentSeries(lo, row[:width], T)))
    entries.sort(key=lambda e: e.pole_order)
    top = entries[-1].pole_order
    attained = {e.pole_order for e in entries}
    gaps = {r for r in range(top + 1) if r not in attained}
    return OrderCompleteBasis(entries, d_used if d_used is not None else 0, gaps)


def order_complete_basis(nb: NormalizedBasis, d: int, ctx: SeriesContext, T: int = 3) -> OrderCompleteBasis:
    return ref_basis(build_Bd(nb, d), ctx, T, d_used=d)


def min_d_for_order(nb: NormalizedBasis, P: int, ctx: SeriesContext) -> int:
    """Smallest d whose order-complete basis reaches pole order P or beyond."""
    if P <= 0:
        return 0
    n = len(nb.b)
    for d in range(math.ceil(P / n) + 2):
        ocb = order_complete_basis(nb, d, ctx, T=1)
        if ocb.entries and ocb.entries[-1].pole_order >= P:
            return d
    raise InternalContractViolation(f"no d up to the search bound reaches pole order {P}")


def genus_estimate(nb: NormalizedBasis, ctx: SeriesContext, d: int) -> int:
    """g = 1 - |B_d| + d * deg(div_inf x), valid once d is large enough."""
    ocb = order_complete_basis(nb, d, ctx, T=1)
    return 1 - len(ocb) + ocb.entries[-1].pole_order
