"""Exact arithmetic over the rationals.

Rationals are ``gmpy2.mpq`` values (always reduced, positive denominator).
On top of them this module provides dense univariate polynomials, rational
functions, and fraction-free linear algebra over Q and Q[x].
"""

from __future__ import annotations

from functools import reduce
from math import lcm as _ilcm

import gmpy2
from gmpy2 import mpq, mpz
from sympy.polys.domains import ZZ as _ZZ
from sympy.polys.euclidtools import dup_gcd as _dup_gcd

Rational = type(mpq(0))

ZERO = mpq(0)
ONE = mpq(1)


def QQ(value) -> Rational:
    """Coerce an int, mpq, Fraction or ``"a/b"`` string to an exact rational."""
    if isinstance(value, Rational):
        return value
    if isinstance(value, str):
        return mpq(value.strip())
    if hasattr(value, "numerator") and hasattr(value, "denominator"):
        return mpq(int(value.numerator), int(value.denominator))
    if isinstance(value, float):
        raise TypeError("floats are not exact; pass an int or a fraction")
    return mpq(value)


def format_rational(r) -> str:
    r = QQ(r)
    if r.denominator == 1:
        return str(int(r.numerator))
    return f"{int(r.numerator)}/{int(r.denominator)}"


# ----------------------------------------------------------------------------
# Integer convolution (Kronecker substitution)
# ----------------------------------------------------------------------------

def _pack(coeffs, bits):
    acc = mpz(0)
    for c in reversed(coeffs):
        acc = (acc << bits) + c
    return acc


def _unpack(value, bits, count):
    mask = (mpz(1) << bits) - 1
    half = mpz(1) << (bits - 1)
    full = mpz(1) << bits
    out = []
    for _ in range(count):
        low = value & mask
        value >>= bits
        if low >= half:
            low -= full
            value += 1
        out.append(low)
    return out


def int_convolve(a, b, limit=None):
    """Product of two integer coefficient lists, optionally cut to ``limit`` terms."""
    if not a or not b:
        return []
    size = len(a) + len(b) - 1
    if limit is not None:
        size = min(size, limit)
        a = a[:size]
        b = b[:size]
    if len(a) * len(b) < 256:
        out = [0] * size
        for i, x in enumerate(a):
            if x:
                for j in range(min(len(b), size - i)):
                    out[i + j] += x * b[j]
        return out
    ma = max(abs(x) for x in a)
    mb = max(abs(x) for x in b)
    if not ma or not mb:
        return [0] * size
    bits = int(gmpy2.bit_length(mpz(ma) * mb * min(len(a), len(b)))) + 2
    prod = _pack(a, bits) * _pack(b, bits)
    return _unpack(prod, bits, size)


def common_denominator(values) -> int:
    return reduce(_ilcm, (int(QQ(v).denominator) for v in values), 1)


def rational_convolve(a, b, limit=None):
    """Convolution of rational coefficient lists via integer Kronecker products."""
    if not a or not b:
        return []
    da = common_denominator(a)
    db = common_denominator(b)
    ia = [mpz(x * da) for x in a]
    ib = [mpz(x * db) for x in b]
    scale = mpq(1, da * db)
    return [mpq(c) * scale for c in int_convolve(ia, ib, limit)]


# ----------------------------------------------------------------------------
# Polynomials
# ----------------------------------------------------------------------------

class Poly:
    """Dense univariate polynomial over Q; ``coeffs[k]`` is the x^k coefficient."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs=()):
        c = [QQ(v) for v in coeffs]
        while c and not c[-1]:
            c.pop()
        self.coeffs = tuple(c)

    @classmethod
    def _raw(cls, coeffs):
        c = list(coeffs)
        while c and not c[-1]:
            c.pop()
        p = cls.__new__(cls)
        p.coeffs = tuple(c)
        return p

    @classmethod
    def const(cls, c) -> Poly:
        return cls((c,))

    @classmethod
    def x(cls) -> Poly:
        return cls((0, 1))

    @classmethod
    def monomial(cls, k, c=1) -> Poly:
        return cls._raw([ZERO] * k + [QQ(c)])

    @property
    def degree(self) -> int:
        """Degree; the zero polynomial has degree -1."""
        return len(self.coeffs) - 1

    @property
    def lc(self) -> Rational:
        return self.coeffs[-1] if self.coeffs else ZERO

    def is_zero(self) -> bool:
        return not self.coeffs

    def is_constant(self) -> bool:
        return len(self.coeffs) <= 1

    def __bool__(self):
        return bool(self.coeffs)

    def __getitem__(self, k) -> Rational:
        return self.coeffs[k] if 0 <= k < len(self.coeffs) else ZERO

    def __eq__(self, other):
        if isinstance(other, Poly):
            return self.coeffs == other.coeffs
        if isinstance(other, (int, Rational)):
            return self.coeffs == Poly.const(other).coeffs
        return NotImplemented

    def __hash__(self):
        return hash(self.coeffs)

    def __neg__(self):
        return Poly._raw([-c for c in self.coeffs])

    def __add__(self, other):
        other = _as_poly(other)
        if other is None:
            return NotImplemented
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, c in enumerate(b):
            out[i] += c
        return Poly._raw(out)

    __radd__ = __add__

    def __sub__(self, other):
        other = _as_poly(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return _as_poly(other) - self

    def __mul__(self, other):
        if isinstance(other, (int, Rational)):
            other = QQ(other)
            if not other:
                return Poly()
            return Poly._raw([c * other for c in self.coeffs])
        other = _as_poly(other)
        if other is None:
            return NotImplemented
        a, b = self.coeffs, other.coeffs
        if not a or not b:
            return Poly()
        if len(a) * len(b) >= 400:
            return Poly._raw(rational_convolve(a, b))
        out = [ZERO] * (len(a) + len(b) - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    out[i + j] += x * y
        return Poly._raw(out)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            raise ValueError("negative power of a polynomial")
        result = Poly.const(1)
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def shift(self, k: int) -> Poly:
        """Multiply by x^k."""
        if not self.coeffs:
            return self
        return Poly._raw([ZERO] * k + list(self.coeffs))

    def __divmod__(self, other):
        other = _as_poly(other)
        if not other:
            raise ZeroDivisionError("polynomial division by zero")
        rem = list(self.coeffs)
        db = other.degree
        if len(rem) <= db:
            return Poly(), self
        inv_lc = 1 / other.lc
        bc = other.coeffs
        quot = [ZERO] * (len(rem) - db)
        for k in range(len(rem) - 1, db - 1, -1):
            c = rem[k]
            if c:
                c = c * inv_lc
                quot[k - db] = c
                off = k - db
                for j in range(db + 1):
                    rem[off + j] -= c * bc[j]
        return Poly._raw(quot), Poly._raw(rem[:db])

    def __floordiv__(self, other):
        return divmod(self, other)[0]

    def __mod__(self, other):
        return divmod(self, other)[1]

    def exact_div(self, other) -> Poly:
        q, r = divmod(self, other)
        if r:
            raise ArithmeticError("inexact polynomial division")
        return q

    def monic(self) -> Poly:
        if not self.coeffs or self.coeffs[-1] == 1:
            return self
        return self * (1 / self.lc)

    def derivative(self) -> Poly:
        return Poly._raw([c * k for k, c in enumerate(self.coeffs)][1:])

    def __call__(self, value):
        acc = ZERO
        for c in reversed(self.coeffs):
            acc = acc * value + c
        return acc

    def reverse(self, degree=None) -> Poly:
        """x^degree * self(1/x)."""
        if degree is None:
            degree = self.degree
        c = list(self.coeffs) + [ZERO] * (degree + 1 - len(self.coeffs))
        return Poly._raw(c[: degree + 1][::-1])

    def content(self) -> Rational:
        """Positive rational c with self/c primitive integral (0 for the zero poly)."""
        if not self.coeffs:
            return ZERO
        den = common_denominator(self.coeffs)
        g = 0
        for c in self.coeffs:
            g = gmpy2.gcd(g, mpz(c * den))
        return mpq(g, den)

    def __repr__(self):
        return f"Poly({self})"

    def __str__(self):
        return format_poly(self)


def _as_poly(v):
    if isinstance(v, Poly):
        return v
    if isinstance(v, (int, Rational)):
        return Poly.const(v)
    return None


def format_poly(p: Poly, var: str = "x") -> str:
    if not p.coeffs:
        return "0"
    parts = []
    for k in range(len(p.coeffs) - 1, -1, -1):
        c = p.coeffs[k]
        if not c:
            continue
        sign = "-" if c < 0 else "+"
        mag = abs(c)
        if k == 0:
            body = format_rational(mag)
        else:
            mono = var if k == 1 else f"{var}^{k}"
            body = mono if mag == 1 else f"{format_rational(mag)}*{mono}"
        parts.append((sign, body))
    first_sign, first = parts[0]
    out = ("-" if first_sign == "-" else "") + first
    for sign, body in parts[1:]:
        out += f" {sign} {body}"
    return out


def _primitive_int(p: Poly):
    c = p.content()
    return [mpz(v / c) for v in reversed(p.coeffs)]


def poly_gcd(a: Poly, b: Poly) -> Poly:
    """Monic gcd; gcd(0, 0) = 0.

    Euclid over Q swells coefficients badly, so both inputs are made
    primitive over Z and handed to sympy's dense integer gcd.
    """
    if not a or not b:
        return (a or b).monic() if (a or b) else Poly()
    if a.degree == 0 or b.degree == 0:
        return Poly.const(1)
    g = _dup_gcd(_primitive_int(a), _primitive_int(b), _ZZ)
    return Poly([mpq(v) for v in reversed(g)]).monic()


def poly_lcm(a: Poly, b: Poly) -> Poly:
    if not a or not b:
        return Poly()
    return (a * b).exact_div(poly_gcd(a, b)).monic()


def poly_ext_gcd(a: Poly, b: Poly):
    """Return (g, s, t) with s*a + t*b = g and g monic."""
    if not a and not b:
        raise ValueError("extended gcd of two zero polynomials")
    r0, r1 = a, b
    s0, s1 = Poly.const(1), Poly()
    t0, t1 = Poly(), Poly.const(1)
    while r1:
        q, r = divmod(r0, r1)
        r0, r1 = r1, r
        s0, s1 = s1, s0 - q * s1
        t0, t1 = t1, t0 - q * t1
    inv = 1 / r0.lc
    return r0 * inv, s0 * inv, t0 * inv


def squarefree_factor(d: Poly):
    """Yun's algorithm: list of (factor, multiplicity) with monic factors.

    The product of factor**multiplicity equals ``d`` up to a constant.
    """
    if not d:
        raise ValueError("squarefree factorization of zero")
    f = d.monic()
    if f.degree <= 0:
        return []
    df = f.derivative()
    a = poly_gcd(f, df)
    b = f.exact_div(a)
    c = df.exact_div(a)
    out = []
    k = 1
    while b.degree > 0:
        e = c - b.derivative()
        g = poly_gcd(b, e)
        if g.degree > 0:
            out.append((g, k))
        b = b.exact_div(g)
        c = e.exact_div(g)
        k += 1
    return out


def mod_inverse(a: Poly, m: Poly) -> Poly:
    g, s, _ = poly_ext_gcd(a % m, m)
    if g.degree != 0:
        raise ZeroDivisionError("not invertible modulo m")
    return s % m


# ----------------------------------------------------------------------------
# Rational functions
# ----------------------------------------------------------------------------

class RatFunc:
    """num/den with den monic and gcd(num, den) = 1."""

    __slots__ = ("num", "den")

    def __init__(self, num, den=None, *, reduced=False):
        num = _as_poly(num) if not isinstance(num, Poly) else num
        if den is None:
            den = Poly.const(1)
            reduced = True
        else:
            den = _as_poly(den) if not isinstance(den, Poly) else den
        if not den:
            raise ZeroDivisionError("rational function with zero denominator")
        if not num:
            self.num, self.den = Poly(), Poly.const(1)
            return
        if not reduced:
            g = poly_gcd(num, den)
            if g.degree > 0:
                num = num.exact_div(g)
                den = den.exact_div(g)
        lc = den.lc
        if lc != 1:
            inv = 1 / lc
            num, den = num * inv, den * inv
        self.num, self.den = num, den

    @classmethod
    def coerce(cls, v) -> RatFunc:
        if isinstance(v, RatFunc):
            return v
        return cls(v)

    def is_zero(self) -> bool:
        return not self.num

    def __bool__(self):
        return bool(self.num)

    def is_polynomial(self) -> bool:
        return self.den.degree == 0

    @property
    def degree(self) -> int:
        """deg num - deg den (the order of the pole at infinity)."""
        if not self.num:
            raise ValueError("degree of the zero rational function")
        return self.num.degree - self.den.degree

    def __eq__(self, other):
        if isinstance(other, (int, Rational, Poly)):
            other = RatFunc(other)
        if not isinstance(other, RatFunc):
            return NotImplemented
        return self.num == other.num and self.den == other.den

    def __hash__(self):
        return hash((self.num, self.den))

    def __neg__(self):
        return RatFunc(-self.num, self.den, reduced=True)

    def __add__(self, other):
        other = RatFunc.coerce(other)
        if not other.num:
            return self
        if not self.num:
            return other
        if self.den == other.den:
            return RatFunc(self.num + other.num, self.den)
        return RatFunc(self.num * other.den + other.num * self.den, self.den * other.den)

    __radd__ = __add__

    def __sub__(self, other):
        return self + (-RatFunc.coerce(other))

    def __rsub__(self, other):
        return RatFunc.coerce(other) - self

    def __mul__(self, other):
        if isinstance(other, (int, Rational)):
            return RatFunc(self.num * other, self.den, reduced=True) if other else RatFunc(0)
        other = RatFunc.coerce(other)
        if not self.num or not other.num:
            return RatFunc(0)
        g1 = poly_gcd(self.num, other.den)
        g2 = poly_gcd(other.num, self.den)
        return RatFunc(
            self.num.exact_div(g1) * other.num.exact_div(g2),
            self.den.exact_div(g2) * other.den.exact_div(g1),
            reduced=True,
        )

    __rmul__ = __mul__

    def inverse(self) -> RatFunc:
        if not self.num:
            raise ZeroDivisionError("inverse of zero rational function")
        return RatFunc(self.den, self.num, reduced=True)

    def __truediv__(self, other):
        return self * RatFunc.coerce(other).inverse()

    def __rtruediv__(self, other):
        return RatFunc.coerce(other) * self.inverse()

    def __pow__(self, k: int):
        if k < 0:
            return self.inverse() ** (-k)
        return RatFunc(self.num ** k, self.den ** k, reduced=True)

    def substitute_inverse(self) -> RatFunc:
        """r(1/x)."""
        if not self.num:
            return self
        dn, dd = self.num.degree, self.den.degree
        num = self.num.reverse()
        den = self.den.reverse()
        if dd >= dn:
            num = num.shift(dd - dn)
        else:
            den = den.shift(dn - dd)
        return RatFunc(num, den)

    def __repr__(self):
        return f"RatFunc({self})"

    def __str__(self):
        if self.den.degree == 0:
            return str(self.num)
        return f"({self.num})/({self.den})"


# ----------------------------------------------------------------------------
# Linear algebra over Q
# ----------------------------------------------------------------------------

def _integer_row(row):
    den = common_denominator(row)
    return [mpz(v * den) for v in row]


def _primitive(row):
    g = 0
    for v in row:
        if v:
            g = gmpy2.gcd(g, v)
            if g == 1:
                return row
    if g in (0, 1):
        return row
    return [v // g for v in row]


def _echelon_int(rows, ncols):
    """Fraction-free row echelon form of integer rows (pivots scanned top-down).

    Rows are kept primitive after every update.  Returns (rows, pivots) with
    only the nonzero rows retained, in pivot order.
    """
    rows = [r for r in rows if any(r)]
    pivots = []
    r = 0
    for c in range(ncols):
        piv = None
        for i in range(r, len(rows)):
            if rows[i][c]:
                piv = i
                break
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        prow = rows[r]
        p = prow[c]
        kept = rows[: r + 1]
        for i in range(r + 1, len(rows)):
            row = rows[i]
            a = row[c]
            if a:
                g = gmpy2.gcd(a, p)
                ma, mp = p // g, a // g
                row = _primitive([ma * row[j] - mp * prow[j] if j >= c else 0 for j in range(ncols)])
                if not any(row):
                    continue
            kept.append(row)
        rows = kept
        pivots.append(c)
        r += 1
        if r == len(rows):
            break
    return rows[:r], pivots


def rref(matrix):
    """Reduced row echelon form over Q.

    Returns (R, pivots): ``R`` has the same shape as the input, pivots are 1
    and pivot columns strictly increase.
    """
    nrows = len(matrix)
    ncols = len(matrix[0]) if nrows else 0
    rows, pivots = _echelon_int([_integer_row(r) for r in matrix], ncols)
    # back substitution in integers, then scale each row by its pivot
    for k in range(len(rows) - 1, -1, -1):
        c = pivots[k]
        prow = rows[k]
        p = prow[c]
        for i in range(k):
            a = rows[i][c]
            if a:
                g = gmpy2.gcd(a, p)
                ma, mp = p // g, a // g
                rows[i] = _primitive([ma * x - mp * y for x, y in zip(rows[i], prow)])
    out = []
    for k, row in enumerate(rows):
        inv = mpq(1, 1) / row[pivots[k]]
        out.append([mpq(v) * inv for v in row])
    out.extend([[ZERO] * ncols for _ in range(nrows - len(out))])
    return out, pivots


def nullspace(matrix, ncols=None):
    """Basis of the right nullspace over Q.

    Each vector is normalized so its first nonzero entry is 1.  An empty list
    means the matrix is injective.
    """
    if ncols is None:
        ncols = len(matrix[0]) if matrix else 0
    if not matrix:
        return [[ONE if i == j else ZERO for i in range(ncols)] for j in range(ncols)]
    reduced, pivots = rref(matrix)
    pivset = set(pivots)
    basis = []
    for free in range(ncols):
        if free in pivset:
            continue
        v = [ZERO] * ncols
        v[free] = ONE
        for k, c in enumerate(pivots):
            v[c] = -reduced[k][free]
        lead = next(x for x in v if x)
        basis.append([x / lead for x in v])
    return basis


def mat_vec(matrix, vec):
    return [sum((a * b for a, b in zip(row, vec)), ZERO) for row in matrix]


def rank(matrix) -> int:
    if not matrix:
        return 0
    return len(rref(matrix)[1])


# ----------------------------------------------------------------------------
# Matrices over Q[x]
# ----------------------------------------------------------------------------

def poly_det(matrix) -> Poly:
    """Determinant of a square matrix of polynomials (Bareiss, exact division)."""
    n = len(matrix)
    if n == 0:
        return Poly.const(1)
    a = [[_as_poly(v) for v in row] for row in matrix]
    sign = 1
    prev = Poly.const(1)
    for k in range(n - 1):
        if not a[k][k]:
            swap = next((i for i in range(k + 1, n) if a[i][k]), None)
            if swap is None:
                return Poly()
            a[k], a[swap] = a[swap], a[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]).exact_div(prev)
        prev = a[k][k]
    return a[n - 1][n - 1] * sign


def berkowitz(matrix, zero, one):
    """Characteristic polynomial det(X*I - M), division free.

    Entries may live in any commutative ring; returns coefficients
    [c_0, ..., c_n] of X^0..X^n (c_n = 1).
    """
    n = len(matrix)
    if n == 0:
        return [one]
    # vect holds the charpoly of the leading principal submatrix, highest first
    vect = [one, -matrix[0][0]]
    for r in range(1, n):
        # Toeplitz column built from R * A^k * C
        row = matrix[r][:r]
        col = [matrix[i][r] for i in range(r)]
        sub = [m[:r] for m in matrix[:r]]
        diag = matrix[r][r]
        t = [one, -diag]
        cur = col
        for _ in range(r):
            val = zero
            for a, b in zip(row, cur):
                val = val + a * b
            t.append(-val)
            cur = [_dot(srow, cur, zero) for srow in sub]
        # multiply lower-triangular Toeplitz matrix (size r+2 x r+1) by vect
        new = []
        for i in range(r + 2):
            acc = zero
            for j in range(min(i, r) + 1):
                if j < len(vect) and i - j < len(t):
                    acc = acc + t[i - j] * vect[j]
            new.append(acc)
        vect = new
    return vect[::-1]


def _dot(a, b, zero):
    acc = zero
    for x, y in zip(a, b):
        acc = acc + x * y
    return acc
