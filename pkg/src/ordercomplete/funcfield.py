"""Arithmetic in K = Q(x)[y]/(p) for a relation p monic in y.

Elements are vectors of n rational functions (coefficients of 1, y, ...,
y^(n-1)).  Internally products are done on polynomial numerators over a
common denominator, which avoids a gcd per coefficient operation.
"""

from __future__ import annotations

from .errors import DegenerateInput, InsufficientPrecision, InternalContractViolation
from .exact import ONE, ZERO, Poly, RatFunc, berkowitz, format_poly, poly_lcm, Rational
from .qseries import LaurentSeries, series_inv, series_mul
from .relation import BivariatePoly


class FunctionField:
    """K = Q(x)[y]/(p); ``p`` must be monic in y."""

    def __init__(self, p: BivariatePoly):
        if p.is_zero() or p.degy < 1:
            raise DegenerateInput("relation must have positive degree in y")
        if not p.is_monic_in_y():
            raise DegenerateInput("relation must be monic in y; apply make_monic first")
        self.p = p
        self.n = p.degy
        # y^n = -sum_{j<n} low[j] y^j
        self.low = [p.coeff_y(j) for j in range(self.n)]
        self.fingerprint = p.fingerprint()
        self._power_sums = None

    def __eq__(self, other):
        return isinstance(other, FunctionField) and self.fingerprint == other.fingerprint

    def __hash__(self):
        return hash(self.fingerprint)

    # -- constructors -------------------------------------------------------

    def element(self, coords) -> FieldElement:
        coords = [RatFunc.coerce(c) for c in coords]
        if len(coords) > self.n:
            raise ValueError(f"expected at most {self.n} coordinates")
        coords += [RatFunc(0)] * (self.n - len(coords))
        return FieldElement(self, tuple(coords))

    def from_numerators(self, nums, den) -> FieldElement:
        den = den if isinstance(den, Poly) else Poly.const(den)
        return self.element([RatFunc(u, den) for u in nums])

    def zero(self) -> FieldElement:
        return self.element([])

    def one(self) -> FieldElement:
        return self.element([1])

    def x(self) -> FieldElement:
        return self.element([Poly.x()])

    def y(self) -> FieldElement:
        if self.n == 1:
            return self.element([-self.low[0]])
        return self.element([0, 1])

    def y_power(self, k: int) -> FieldElement:
        nums = self.reduce_numerator([Poly()] * k + [Poly.const(1)])
        return self.from_numerators(nums, Poly.const(1))

    # -- polynomial-numerator kernels -------------------------------------

    def reduce_numerator(self, u):
        """Reduce a coefficient list in Q[x][y] (any length) modulo p."""
        u = list(u)
        n = self.n
        for k in range(len(u) - 1, n - 1, -1):
            c = u[k]
            if c:
                for j in range(n):
                    if self.low[j]:
                        u[k - n + j] = u[k - n + j] - c * self.low[j]
        u = u[:n]
        return u + [Poly()] * (n - len(u))

    def mul_numerators(self, u, v):
        prod = [Poly()] * (len(u) + len(v) - 1)
        for i, a in enumerate(u):
            if a:
                for j, b in enumerate(v):
                    if b:
                        prod[i + j] = prod[i + j] + a * b
        return self.reduce_numerator(prod)

    def power_sums(self):
        """Tr(y^k) for k = 0 .. 2n-2 (Newton's identities)."""
        if self._power_sums is None:
            n = self.n
            a = self.low  # monic: coefficient of Y^j is low[j], Y^n has 1
            s = [Poly.const(n)]
            for k in range(1, 2 * n - 1):
                acc = Poly()
                for i in range(1, min(k, n + 1)):
                    acc = acc + a[n - i] * s[k - i]
                if k <= n:
                    acc = acc + a[n - k] * k
                s.append(-acc)
            self._power_sums = s
        return self._power_sums

    def trace_numerator(self, u) -> Poly:
        s = self.power_sums()
        acc = Poly()
        for j, c in enumerate(u):
            if c:
                acc = acc + c * s[j]
        return acc

    def multiplication_matrix(self, u):
        """Rows: numerator coordinates of u * y^i."""
        rows = []
        cur = list(u)
        for _ in range(self.n):
            rows.append(cur)
            cur = self.reduce_numerator([Poly()] + cur)
        return rows


class FieldElement:
    __slots__ = ("field", "coords", "_numden")

    def __init__(self, field: FunctionField, coords):
        self.field = field
        self.coords = tuple(coords)
        self._numden = None

    def _check(self, other):
        if not isinstance(other, FieldElement):
            other = self.field.element([other])
        elif other.field != self.field:
            raise InternalContractViolation("elements of different function fields")
        return other

    def numden(self):
        """(numerators, D) with self = sum numerators[j] y^j / D and D monic."""
        if self._numden is None:
            den = Poly.const(1)
            for c in self.coords:
                if c.num:
                    den = poly_lcm(den, c.den)
            nums = [c.num * den.exact_div(c.den) if c.num else Poly() for c in self.coords]
            self._numden = (nums, den)
        return self._numden

    def is_zero(self) -> bool:
        return all(not c for c in self.coords)

    def __bool__(self):
        return not self.is_zero()

    def __eq__(self, other):
        if not isinstance(other, FieldElement):
            try:
                other = self.field.element([other])
            except TypeError:
                return NotImplemented
        return self.field == other.field and self.coords == other.coords

    def __hash__(self):
        return hash(self.coords)

    def __neg__(self):
        return FieldElement(self.field, tuple(-c for c in self.coords))

    def __add__(self, other):
        other = self._check(other)
        return FieldElement(self.field, tuple(a + b for a, b in zip(self.coords, other.coords)))

    __radd__ = __add__

    def __sub__(self, other):
        return self + (-self._check(other))

    def __rsub__(self, other):
        return self._check(other) - self

    def __mul__(self, other):
        if isinstance(other, (int, Rational, Poly, RatFunc)):
            r = RatFunc.coerce(other)
            return FieldElement(self.field, tuple(c * r for c in self.coords))
        other = self._check(other)
        return ff_mul(self, other)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, (int, Rational, Poly, RatFunc)):
            return self * RatFunc.coerce(other).inverse()
        return ff_mul(self, ff_inv(self._check(other)))

    def __rtruediv__(self, other):
        return ff_mul(self._check(other), ff_inv(self))

    def __pow__(self, k: int):
        if k < 0:
            return ff_inv(self) ** (-k)
        result = self.field.one()
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def y_degree(self) -> int:
        return max((j for j, c in enumerate(self.coords) if c), default=-1)

    def serialize(self) -> str:
        """n lines "num / den", polynomials in x, coefficient of y^j on line j."""
        return "".join(f"{format_poly(c.num)} / {format_poly(c.den)}\n" for c in self.coords)

    def __repr__(self):
        return f"FieldElement({self})"

    def __str__(self):
        parts = []
        for j, c in enumerate(self.coords):
            if not c:
                continue
            mono = "" if j == 0 else ("*y" if j == 1 else f"*y^{j}")
            parts.append(f"({c}){mono}")
        return " + ".join(parts) if parts else "0"


def ff_mul(a: FieldElement, b: FieldElement) -> FieldElement:
    ua, da = a.numden()
    ub, db = b.numden()
    field = a.field
    return field.from_numerators(field.mul_numerators(ua, ub), da * db)


# ----------------------------------------------------------------------------
# Inversion via extended gcd in Q(x)[Y]
# ----------------------------------------------------------------------------

def _trim(u):
    u = list(u)
    while u and not u[-1]:
        u.pop()
    return u


def _upoly_divmod(a, b):
    a = list(a)
    db = len(b) - 1
    inv = b[-1].inverse()
    q = [RatFunc(0)] * max(len(a) - db, 1)
    for k in range(len(a) - 1, db - 1, -1):
        c = a[k]
        if c:
            c = c * inv
            q[k - db] = c
            for j in range(db + 1):
                a[k - db + j] = a[k - db + j] - c * b[j]
    return _trim(q), _trim(a[:db])


def _upoly_mul(a, b):
    if not a or not b:
        return []
    out = [RatFunc(0)] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] = out[i + j] + x * y
    return _trim(out)


def _upoly_sub(a, b):
    n = max(len(a), len(b))
    a = list(a) + [RatFunc(0)] * (n - len(a))
    b = list(b) + [RatFunc(0)] * (n - len(b))
    return _trim([x - y for x, y in zip(a, b)])


def ff_inv(a: FieldElement) -> FieldElement:
    """a^-1 from s*a + t*p = 1 in Q(x)[Y]."""
    if a.is_zero():
        raise ZeroDivisionError("inverse of zero field element")
    field = a.field
    pcoef = [RatFunc(c) for c in field.low] + [RatFunc(1)]
    r0, r1 = pcoef, _trim(a.coords)
    s0, s1 = [], [RatFunc(1)]
    while r1:
        q, r = _upoly_divmod(r0, r1)
        r0, r1 = r1, r
        s0, s1 = s1, _upoly_sub(s0, _upoly_mul(q, s1))
    if len(r0) != 1:
        raise DegenerateInput("element is a zero divisor; the relation is reducible")
    inv = r0[0].inverse()
    return field.element([c * inv for c in s0])


# ----------------------------------------------------------------------------
# Characteristic polynomial, integrality, traces
# ----------------------------------------------------------------------------

def charpoly(a: FieldElement):
    """Coefficients [c_0, ..., c_n] (RatFunc, c_n = 1) of det(X - mult_a)."""
    u, den = a.numden()
    field = a.field
    mat = field.multiplication_matrix(u)
    coeffs = berkowitz(mat, Poly(), Poly.const(1))
    n = field.n
    out = []
    for k, c in enumerate(coeffs):
        out.append(RatFunc(c, den ** (n - k)))
    return out


def is_integral(a: FieldElement) -> bool:
    """Integral over Q[x]: every charpoly coefficient is a polynomial."""
    return all(c.is_polynomial() for c in charpoly(a))


def is_integral_at_infinity(a: FieldElement) -> bool:
    """Integral over R_inf: every charpoly coefficient has no pole at x = infinity."""
    return all(not c or c.degree <= 0 for c in charpoly(a))


def trace(a: FieldElement) -> RatFunc:
    u, den = a.numden()
    return RatFunc(a.field.trace_numerator(u), den)


def trace_matrix(basis):
    return [[trace(bi * bj) for bj in basis] for bi in basis]


def multiplication_matrix(a: FieldElement):
    """Matrix over Q(x) whose row i holds the coordinates of a * y^i."""
    u, den = a.numden()
    return [[RatFunc(c, den) for c in row] for row in a.field.multiplication_matrix(u)]


# ----------------------------------------------------------------------------
# q-expansions
# ----------------------------------------------------------------------------

def poly_at_series(poly: Poly, s: LaurentSeries) -> LaurentSeries:
    acc = LaurentSeries.zero()
    for c in reversed(poly.coeffs):
        acc = series_mul(acc, s) + c
    return acc


def to_qseries(a: FieldElement, ts: LaurentSeries, fs: LaurentSeries, trunc: int | None = None) -> LaurentSeries:
    """sum_j coords[j](ts) * fs^j.

    With ``trunc`` given the result is cut to O(q^trunc), and
    InsufficientPrecision is raised if the inputs do not support it.
    """
    u, den = a.numden()
    acc = LaurentSeries.zero()
    for c in reversed(u):
        acc = series_mul(acc, fs) + poly_at_series(c, ts)
    if den.degree > 0:
        acc = series_mul(acc, series_inv(poly_at_series(den, ts)))
    elif den.lc != 1:
        acc = acc * (1 / den.lc)
    if trunc is not None:
        if acc.trunc is not None and acc.trunc < trunc:
            raise InsufficientPrecision(f"inputs support O(q^{acc.trunc}) only; O(q^{trunc}) requested")
        acc = acc.truncate(trunc)
    return acc


class SeriesContext:
    """Expansions of t and f at any precision, plus precision-lifting expansion.

    Sources are objects with a ``series(trunc)`` method (recipes) or fixed
    LaurentSeries; a fixed source cannot be lifted past its own precision.
    ``y_map`` turns (ts, fs) into the series of the field generator y, for
    relations that were made monic by rescaling y.
    """

    def __init__(self, t_source, f_source, y_map=None, margin: int = 10):
        self.t_source = t_source
        self.f_source = f_source
        self.y_map = y_map
        self.margin = margin

    @staticmethod
    def _get(source, W):
        if isinstance(source, LaurentSeries):
            if source.trunc is not None and source.trunc < W:
                return source
            return source.truncate(W)
        return source.series(W)

    def t(self, W: int) -> LaurentSeries:
        return self._get(self.t_source, W)

    def f(self, W: int) -> LaurentSeries:
        return self._get(self.f_source, W)

    def y(self, W: int) -> LaurentSeries:
        ts, fs = self.t(W), self.f(W)
        return fs if self.y_map is None else self.y_map(ts, fs)

    def expand(self, a: FieldElement, T: int) -> LaurentSeries:
        """to_qseries(a) to exactly O(q^T), raising input precision as needed."""
        W = T + self.margin
        for _ in range(12):
            s = to_qseries(a, self.t(W), self.y(W))
            if s.trunc is None or s.trunc >= T:
                return s.truncate(T)
            ts = self.t(W)
            if ts.trunc is not None and ts.trunc < W:
                break
            W += T - s.trunc + self.margin
        raise InsufficientPrecision(f"could not expand element to O(q^{T})")
