"""Algebraic relation p(t, f) = 0 between two q-series, by undetermined coefficients."""

from __future__ import annotations

import hashlib
from dataclasses import dataclass, field
from math import gcd

from gmpy2 import mpz

from .errors import CoprimalityError, DegenerateInput, InsufficientPrecision
from .exact import Poly, common_denominator, nullspace
from .qseries import LaurentSeries, series_mul, series_pow


@dataclass(frozen=True)
class BivariatePoly:
    """Integer polynomial sum c_ij x^i y^j, stored sparsely as {(i, j): c_ij}."""

    coeffs: dict = field(default_factory=dict)

    def __post_init__(self):
        clean = {(int(i), int(j)): int(c) for (i, j), c in self.coeffs.items() if c}
        object.__setattr__(self, "coeffs", clean)

    @property
    def degx(self) -> int:
        return max((i for i, _ in self.coeffs), default=-1)

    @property
    def degy(self) -> int:
        return max((j for _, j in self.coeffs), default=-1)

    def is_zero(self) -> bool:
        return not self.coeffs

    def coeff_y(self, j: int) -> Poly:
        """Coefficient of y^j as a polynomial in x."""
        terms = {i: c for (i, jj), c in self.coeffs.items() if jj == j}
        if not terms:
            return Poly()
        return Poly([terms.get(i, 0) for i in range(max(terms) + 1)])

    def y_coefficients(self):
        return [self.coeff_y(j) for j in range(self.degy + 1)]

    @classmethod
    def from_y_coefficients(cls, polys) -> BivariatePoly:
        out = {}
        den = common_denominator(c for p in polys for c in p.coeffs)
        for j, p in enumerate(polys):
            for i, c in enumerate(p.coeffs):
                if c:
                    v = c * den
                    if v.denominator != 1:
                        raise ValueError("non-integral coefficient")
                    out[(i, j)] = int(v)
        return cls(out)

    def is_monic_in_y(self) -> bool:
        return self.coeff_y(self.degy) == Poly.const(1)

    def serialize(self) -> str:
        """Canonical text: one line "i j coefficient" per term, sorted by (i, j)."""
        return "".join(f"{i} {j} {c}\n" for (i, j), c in sorted(self.coeffs.items()))

    @classmethod
    def parse(cls, text: str) -> BivariatePoly:
        out = {}
        for lineno, line in enumerate(text.splitlines(), 1):
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            parts = line.split()
            if len(parts) != 3:
                raise ValueError(f"line {lineno}: expected 'i j coefficient', got {line!r}")
            i, j, c = (int(v) for v in parts)
            if (i, j) in out:
                raise ValueError(f"line {lineno}: duplicate monomial x^{i} y^{j}")
            out[(i, j)] = c
        return cls(out)

    def fingerprint(self) -> str:
        return hashlib.sha256(self.serialize().encode()).hexdigest()[:16]

    def evaluate(self, xs: LaurentSeries, ys: LaurentSeries) -> LaurentSeries:
        """p(xs, ys) by Horner in y with polynomial-in-x coefficients."""
        acc = None
        for poly in reversed(self.y_coefficients()):
            coeff = _poly_at_series(poly, xs)
            acc = coeff if acc is None else series_mul(acc, ys) + coeff
        return acc if acc is not None else LaurentSeries.zero()

    def __str__(self):
        if not self.coeffs:
            return "0"
        terms = []
        for (i, j), c in sorted(self.coeffs.items(), key=lambda t: (-t[0][1], -t[0][0])):
            mono = "*".join(m for m in (
                "" if i == 0 else ("x" if i == 1 else f"x^{i}"),
                "" if j == 0 else ("y" if j == 1 else f"y^{j}"),
            ) if m)
            mag = abs(c)
            body = str(mag) if not mono else (mono if mag == 1 else f"{mag}*{mono}")
            terms.append(("-" if c < 0 else "+", body))
        out = ("-" if terms[0][0] == "-" else "") + terms[0][1]
        for sign, body in terms[1:]:
            out += f" {sign} {body}"
        return out


def _poly_at_series(poly: Poly, s: LaurentSeries) -> LaurentSeries:
    acc = LaurentSeries.zero()
    for c in reversed(poly.coeffs):
        acc = series_mul(acc, s) + c
    return acc


def ansatz_precision(n: int, m: int) -> int:
    """Absolute precision the generator series need for the Ansatz."""
    return n * m + (n + 1) * (m + 1) + 10


def ansatz_system(ts: LaurentSeries, fs: LaurentSeries, n: int, m: int):
    """Coefficient-matching matrix; column (i, j) holds the q-expansion of t^i f^j.

    Returns (rows, monomials, lowest exponent, precision of the equations).
    """
    tpow = [LaurentSeries.constant(1)]
    for _ in range(m):
        tpow.append(series_mul(tpow[-1], ts))
    fpow = [LaurentSeries.constant(1)]
    for _ in range(n):
        fpow.append(series_mul(fpow[-1], fs))
    monomials = [(i, j) for j in range(n + 1) for i in range(m + 1)]
    columns = [series_mul(tpow[i], fpow[j]) for i, j in monomials]
    lowest = min(c.valuation for c in columns if not c.is_zero())
    trunc = min((c.trunc for c in columns if c.trunc is not None), default=None)
    if trunc is None:
        # exact inputs: the equations are all coefficients of the columns
        trunc = max(c.end for c in columns)
    rows = [[col[k] for col in columns] for k in range(lowest, trunc)]
    return rows, monomials, lowest, trunc


def find_relation(ts: LaurentSeries, fs: LaurentSeries) -> BivariatePoly:
    """Irreducible p with p(ts, fs) = O(q^T), deg_y p = pole order of ts.

    Raises CoprimalityError if the pole orders share a factor,
    InsufficientPrecision if no relation shows up, DegenerateInput if the
    relation is not unique up to scale.
    """
    n, m = ts.pole_order(), fs.pole_order()
    if n <= 0 or m <= 0 or gcd(n, m) != 1:
        raise CoprimalityError(f"pole orders {n} and {m} are not coprime positive integers")
    need = ansatz_precision(n, m)
    for s, name in ((ts, "t"), (fs, "f")):
        if s.trunc is not None and s.trunc < need:
            raise InsufficientPrecision(f"{name} is known to O(q^{s.trunc}); the Ansatz needs O(q^{need})")
    rows, monomials, _, _ = ansatz_system(ts, fs, n, m)
    exact = ts.trunc is None and fs.trunc is None
    if len(rows) < len(monomials) and not exact:
        raise InsufficientPrecision(f"only {len(rows)} equations for {len(monomials)} unknowns")
    kernel = nullspace(rows, len(monomials))
    if not kernel:
        raise InsufficientPrecision("the Ansatz system has no nonzero solution")
    if len(kernel) > 1:
        raise DegenerateInput(f"relation space has dimension {len(kernel)}; expected 1")
    vec = kernel[0]
    den = common_denominator(vec)
    ints = [mpz(v * den) for v in vec]
    g = 0
    for v in ints:
        g = gcd(g, int(v))
    p = BivariatePoly({mon: int(v // g) for mon, v in zip(monomials, ints) if v})
    if p.degy != n:
        raise DegenerateInput(f"relation has y-degree {p.degy}, expected {n}")
    if p.coeff_y(n).lc < 0:
        p = BivariatePoly({k: -c for k, c in p.coeffs.items()})
    return p


def verify_relation(p: BivariatePoly, ts: LaurentSeries, fs: LaurentSeries, trunc: int) -> int:
    """Valuation of p(ts, fs) through O(q^trunc); the relation holds iff this is >= trunc.

    Raises InsufficientPrecision when the inputs do not determine p(ts, fs)
    that far.
    """
    if p.is_zero():
        raise DegenerateInput("the zero polynomial is not a relation")
    r = p.evaluate(ts, fs)
    if r.trunc is not None:
        if r.trunc < trunc and (r.is_zero() or r.valuation >= r.trunc):
            raise InsufficientPrecision(f"p(t, f) is known to O(q^{r.trunc}) only; O(q^{trunc}) requested")
        if r.trunc > trunc:
            r = r.truncate(trunc)
    if r.is_zero():
        return trunc
    return min(r.valuation, trunc)
