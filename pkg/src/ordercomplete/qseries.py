"""Truncated Laurent series in q with exact rational coefficients.

A series is stored as a valuation ``v``, the coefficients of q^v .. q^(T-1),
and the absolute precision ``T`` (the series is known modulo O(q^T)).
``trunc=None`` marks an exact Laurent polynomial such as q^-5 or a constant.
"""

from __future__ import annotations

from functools import lru_cache

from gmpy2 import mpq

from .errors import SeriesDivisionError
from .exact import ONE, ZERO, QQ, Rational, format_rational, rational_convolve


def _min_prec(*values):
    finite = [v for v in values if v is not None]
    return min(finite) if finite else None


class LaurentSeries:
    __slots__ = ("valuation", "coeffs", "trunc")

    def __init__(self, start, coeffs, trunc=None):
        coeffs = [QQ(c) for c in coeffs]
        self._set(start, coeffs, trunc)

    @classmethod
    def _make(cls, start, coeffs, trunc):
        s = cls.__new__(cls)
        s._set(start, list(coeffs), trunc)
        return s

    def _set(self, start, coeffs, trunc):
        if trunc is not None:
            del coeffs[max(trunc - start, 0):]
        lead = 0
        while lead < len(coeffs) and not coeffs[lead]:
            lead += 1
        while coeffs and not coeffs[-1]:
            coeffs.pop()
        if lead >= len(coeffs):
            coeffs = []
            start = trunc if trunc is not None else 0
        else:
            coeffs = coeffs[lead:]
            start += lead
        self.valuation = start
        self.coeffs = tuple(coeffs)
        self.trunc = trunc

    # -- constructors -------------------------------------------------------

    @classmethod
    def monomial(cls, k: int, c=1) -> LaurentSeries:
        return cls._make(k, [QQ(c)], None)

    @classmethod
    def constant(cls, c) -> LaurentSeries:
        return cls._make(0, [QQ(c)], None)

    @classmethod
    def zero(cls, trunc=None) -> LaurentSeries:
        return cls._make(0, [], trunc)

    @classmethod
    def from_dict(cls, terms: dict, trunc=None) -> LaurentSeries:
        if not terms:
            return cls.zero(trunc)
        lo, hi = min(terms), max(terms)
        return cls(lo, [terms.get(k, 0) for k in range(lo, hi + 1)], trunc)

    # -- inspection ---------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.coeffs

    def is_exact(self) -> bool:
        return self.trunc is None

    @property
    def end(self) -> int:
        """One past the exponent of the last stored coefficient."""
        return self.valuation + len(self.coeffs)

    def __getitem__(self, k: int) -> Rational:
        if self.trunc is not None and k >= self.trunc:
            raise IndexError(f"coefficient of q^{k} is beyond O(q^{self.trunc})")
        i = k - self.valuation
        if 0 <= i < len(self.coeffs):
            return self.coeffs[i]
        return ZERO

    def terms(self):
        """(exponent, coefficient) pairs with nonzero coefficient."""
        return [(self.valuation + i, c) for i, c in enumerate(self.coeffs) if c]

    def coefficients(self, start: int, stop: int):
        return [self[k] for k in range(start, stop)]

    def pole_order(self) -> int:
        if not self.coeffs:
            raise ValueError("pole order of a series that is zero to working precision")
        return -self.valuation

    def _eff_val(self):
        # valuation for precision bookkeeping; a zero series is known zero up to trunc
        return self.valuation if self.coeffs else self.trunc

    def truncate(self, trunc: int) -> LaurentSeries:
        if self.trunc is not None and trunc > self.trunc:
            raise ValueError(f"cannot raise precision from {self.trunc} to {trunc}")
        return LaurentSeries._make(self.valuation, self.coeffs, trunc)

    def __eq__(self, other):
        if not isinstance(other, LaurentSeries):
            return NotImplemented
        return (self.valuation, self.coeffs, self.trunc) == (other.valuation, other.coeffs, other.trunc)

    def __hash__(self):
        return hash((self.valuation, self.coeffs, self.trunc))

    def agrees_with(self, other: LaurentSeries) -> bool:
        """True if both series coincide up to the smaller of their precisions."""
        return (self - other).is_zero()

    # -- arithmetic ---------------------------------------------------------

    def __neg__(self):
        return LaurentSeries._make(self.valuation, [-c for c in self.coeffs], self.trunc)

    def __add__(self, other):
        other = _coerce(other)
        if other is None:
            return NotImplemented
        trunc = _min_prec(self.trunc, other.trunc)
        if not self.coeffs and not other.coeffs:
            return LaurentSeries.zero(trunc)
        parts = [s for s in (self, other) if s.coeffs]
        lo = min(s.valuation for s in parts)
        hi = max(s.end for s in parts)
        if trunc is not None:
            hi = min(hi, trunc)
        if hi <= lo:
            return LaurentSeries.zero(trunc)
        out = [ZERO] * (hi - lo)
        for s in parts:
            off = s.valuation - lo
            for i, c in enumerate(s.coeffs[: max(hi - s.valuation, 0)]):
                out[off + i] += c
        return LaurentSeries._make(lo, out, trunc)

    __radd__ = __add__

    def __sub__(self, other):
        other = _coerce(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return _coerce(other) - self

    def __mul__(self, other):
        if isinstance(other, (int, Rational)):
            c = QQ(other)
            return LaurentSeries._make(self.valuation, [x * c for x in self.coeffs] if c else [], self.trunc)
        other = _coerce(other)
        if other is None:
            return NotImplemented
        return series_mul(self, other)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, (int, Rational)):
            return self * (1 / QQ(other))
        return series_mul(self, series_inv(_coerce(other)))

    def __rtruediv__(self, other):
        return series_mul(_coerce(other), series_inv(self))

    def __pow__(self, k: int):
        return series_pow(self, k)

    def derivative(self) -> LaurentSeries:
        return series_derivative(self)

    def shift(self, k: int) -> LaurentSeries:
        """Multiply by q^k."""
        trunc = None if self.trunc is None else self.trunc + k
        return LaurentSeries._make(self.valuation + k, self.coeffs, trunc)

    # -- display ------------------------------------------------------------

    def __repr__(self):
        return f"LaurentSeries({self})"

    def __str__(self):
        return format_series(self)


def _coerce(v):
    if isinstance(v, LaurentSeries):
        return v
    if isinstance(v, (int, Rational)):
        return LaurentSeries.constant(v)
    return None


def format_series(s: LaurentSeries, max_terms: int | None = None) -> str:
    parts = []
    for k, c in s.terms():
        if max_terms is not None and len(parts) >= max_terms:
            parts.append(("+", "..."))
            break
        sign = "-" if c < 0 else "+"
        mag = abs(c)
        mono = "" if k == 0 else ("q" if k == 1 else f"q^{k}")
        if not mono:
            body = format_rational(mag)
        elif mag == 1:
            body = mono
        else:
            body = f"{format_rational(mag)}*{mono}"
        parts.append((sign, body))
    if s.trunc is not None:
        parts.append(("+", f"O(q^{s.trunc})"))
    if not parts:
        return "0"
    out = ("-" if parts[0][0] == "-" else "") + parts[0][1]
    for sign, body in parts[1:]:
        out += f" {sign} {body}"
    return out


# ----------------------------------------------------------------------------
# Core operations
# ----------------------------------------------------------------------------

def series_mul(a: LaurentSeries, b: LaurentSeries) -> LaurentSeries:
    """Product; trunc is min(v_a + T_b, v_b + T_a)."""
    if (not a.coeffs and a.trunc is None) or (not b.coeffs and b.trunc is None):
        return LaurentSeries.zero()
    va, vb = a._eff_val(), b._eff_val()
    trunc = _min_prec(
        None if b.trunc is None else va + b.trunc,
        None if a.trunc is None else vb + a.trunc,
    )
    if not a.coeffs or not b.coeffs:
        return LaurentSeries.zero(trunc)
    start = a.valuation + b.valuation
    limit = None if trunc is None else max(trunc - start, 0)
    if limit == 0:
        return LaurentSeries.zero(trunc)
    return LaurentSeries._make(start, rational_convolve(list(a.coeffs), list(b.coeffs), limit), trunc)


def series_inv(s: LaurentSeries, trunc: int | None = None) -> LaurentSeries:
    """1/s. Exact inputs that are not monomials need an explicit ``trunc``."""
    if not s.coeffs:
        raise SeriesDivisionError("inversion of a series that is zero to working precision")
    v = s.valuation
    if s.trunc is None:
        if len(s.coeffs) == 1 and trunc is None:
            return LaurentSeries._make(-v, [1 / s.coeffs[0]], None)
        if trunc is None:
            raise ValueError("inverse of an exact non-monomial series needs a target precision")
        out_trunc = trunc
    else:
        out_trunc = s.trunc - 2 * v
        if trunc is not None:
            out_trunc = min(out_trunc, trunc)
    count = out_trunc + v
    if count <= 0:
        return LaurentSeries.zero(out_trunc)
    return LaurentSeries._make(-v, _inverse_coeffs(list(s.coeffs), count), out_trunc)


def _inverse_coeffs(c, count):
    """First ``count`` coefficients of 1/(c0 + c1 q + ...), c0 != 0."""
    c = c[:count]
    nonzero = [(k, x) for k, x in enumerate(c) if x and k]
    if len(nonzero) <= 40 or count < 128:
        inv0 = 1 / c[0]
        integral = inv0.denominator == 1 and all(x.denominator == 1 for _, x in nonzero)
        if integral:
            i0 = int(inv0)
            nz = [(k, int(x)) for k, x in nonzero]
            out = [i0] + [0] * (count - 1)
            for n in range(1, count):
                acc = 0
                for k, x in nz:
                    if k > n:
                        break
                    acc += x * out[n - k]
                out[n] = -acc * i0
            return [mpq(v) for v in out]
        out = [inv0] + [ZERO] * (count - 1)
        for n in range(1, count):
            acc = ZERO
            for k, x in nonzero:
                if k > n:
                    break
                acc += x * out[n - k]
            out[n] = -acc * inv0
        return out
    # dense: Newton iteration b <- b(2 - c b)
    b = [1 / c[0]]
    n = 1
    while n < count:
        n = min(2 * n, count)
        cb = rational_convolve(c[:n], b, n)
        e = [-x for x in cb]
        e[0] += 2
        b = rational_convolve(b, e, n)
    return b


def series_pow(s: LaurentSeries, k: int) -> LaurentSeries:
    if k < 0:
        return series_inv(series_pow(s, -k))
    result = LaurentSeries.constant(1)
    base = s
    while k:
        if k & 1:
            result = series_mul(result, base)
        k >>= 1
        if k:
            base = series_mul(base, base)
    return result


def series_derivative(s: LaurentSeries) -> LaurentSeries:
    """d/dq: q^k -> k q^(k-1)."""
    trunc = None if s.trunc is None else s.trunc - 1
    v = s.valuation
    return LaurentSeries._make(v - 1, [c * (v + i) for i, c in enumerate(s.coeffs)], trunc)


def pole_order(s: LaurentSeries) -> int:
    return s.pole_order()


# ----------------------------------------------------------------------------
# Named series
# ----------------------------------------------------------------------------

@lru_cache(maxsize=64)
def _pentagonal(delta: int, trunc: int):
    """prod_{n>=1} (1 - q^(delta n)) to O(q^trunc), by the pentagonal number theorem."""
    out = [0] * trunc
    k = 0
    while True:
        hit = False
        for j in ((k, -k) if k else (0,)):
            e = delta * j * (3 * j - 1) // 2
            if e < trunc:
                out[e] += -1 if j % 2 else 1
                hit = True
        if not hit:
            break
        k += 1
    return tuple(out)


def euler_product(delta: int, e: int, trunc: int) -> LaurentSeries:
    """prod_{n>=1} (1 - q^(delta n))^e to O(q^trunc)."""
    if delta < 1:
        raise ValueError("Euler product needs delta >= 1")
    if trunc <= 0:
        return LaurentSeries.zero(trunc)
    base = LaurentSeries._make(0, [mpq(v) for v in _pentagonal(delta, trunc)], trunc)
    if e == 0:
        return LaurentSeries(0, [1], trunc)
    if e < 0:
        base = series_inv(base)
    return series_pow(base, abs(e)).truncate(trunc)


@lru_cache(maxsize=8)
def partition_numbers(count: int):
    """p(0), ..., p(count-1) via the pentagonal recurrence."""
    s = euler_product(1, -1, count)
    return tuple(int(s[k]) for k in range(count))


def partition_slice(a: int, b: int, trunc: int) -> LaurentSeries:
    """sum_{n>=0} p(a n + b) q^n to O(q^trunc)."""
    if a <= 0:
        raise ValueError("partition slice needs a >= 1")
    if trunc <= 0:
        return LaurentSeries.zero(trunc)
    parts = partition_numbers(a * trunc + b + 1)
    return LaurentSeries(0, [parts[a * n + b] if a * n + b >= 0 else 0 for n in range(trunc)], trunc)


def _sigma3(count):
    sig = [0] * count
    for d in range(1, count):
        d3 = d ** 3
        for m in range(d, count, d):
            sig[m] += d3
    return sig


def eisenstein_e4(trunc: int) -> LaurentSeries:
    """E4 = 1 + 240 sum sigma_3(n) q^n."""
    if trunc <= 0:
        return LaurentSeries.zero(trunc)
    sig = _sigma3(trunc)
    return LaurentSeries(0, [1] + [240 * s for s in sig[1:]], trunc)


def delta_series(trunc: int) -> LaurentSeries:
    """Delta = q prod (1 - q^n)^24."""
    return euler_product(1, 24, max(trunc - 1, 0)).shift(1) if trunc > 1 else LaurentSeries.zero(trunc)


def j_invariant(trunc: int) -> LaurentSeries:
    """J = E4^3 / Delta = q^-1 + 744 + ..."""
    e4 = eisenstein_e4(trunc + 2)
    return (series_pow(e4, 3) / delta_series(trunc + 2)).truncate(trunc)
