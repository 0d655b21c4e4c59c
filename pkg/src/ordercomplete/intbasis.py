"""Integral bases of K = Q(x)[y]/(p) over Q[x] and over R_inf.

The maximal order is reached by the Round 2 iteration: at a squarefree
modulus d the radical of O/dO is the kernel of the trace form (valid in
characteristic 0), and O is replaced by the multiplier ring of that radical
until it stops growing.  Linear algebra runs over Q[x]/(d); when a pivot
turns out to be a zero divisor, d is split along the gcd and each part is
handled on its own.

Lattices are stored as (M, den): row i of the lower-triangular polynomial
matrix M holds the power-basis numerators of the i-th basis element, all over
the common denominator den.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .errors import DegenerateInput, InternalContractViolation
from .exact import (
    Poly,
    RatFunc,
    mod_inverse,
    poly_det,
    poly_gcd,
    squarefree_factor,
)
from .funcfield import FieldElement, FunctionField, is_integral, is_integral_at_infinity
from .relation import BivariatePoly

GLOBAL = "global"
AT_INFINITY = "at_infinity"


@dataclass
class IntegralBasis:
    elems: list
    kind: str
    field: FunctionField
    # bookkeeping for the certificate and for transport
    moduli: list = field(default_factory=list)
    weight: int = 0
    lattice: tuple | None = None

    def __len__(self):
        return len(self.elems)

    def __iter__(self):
        return iter(self.elems)

    def __getitem__(self, i):
        return self.elems[i]

    def coordinates(self, elem: FieldElement):
        """Coordinates of ``elem`` in this basis, as rational functions."""
        return triangular_coordinates([e.coords for e in self.elems], elem.coords)

    def serialize(self) -> str:
        out = [f"kind {self.kind}\n"]
        for k, e in enumerate(self.elems):
            out.append(f"element {k}\n")
            out.append(e.serialize())
        return "".join(out)


class _Split(Exception):
    def __init__(self, factor):
        super().__init__("zero divisor")
        self.factor = factor


# ----------------------------------------------------------------------------
# Monic transform
# ----------------------------------------------------------------------------

@dataclass(frozen=True)
class MonicTransform:
    """p~(x, Y) = lc^(n-1) p(x, Y/lc); the new generator is Y = lc(x) * y."""

    lc: Poly

    def is_identity(self) -> bool:
        return self.lc == Poly.const(1)

    def y_series(self, ts, fs):
        from .funcfield import poly_at_series

        return fs if self.is_identity() else poly_at_series(self.lc, ts) * fs


def make_monic(p: BivariatePoly):
    n = p.degy
    coeffs = p.y_coefficients()
    lc = coeffs[n]
    if lc == Poly.const(1):
        return p, MonicTransform(lc)
    if lc.is_zero():
        raise DegenerateInput("relation has zero leading coefficient")
    new = [coeffs[j] * lc ** (n - 1 - j) for j in range(n)] + [Poly.const(1)]
    return BivariatePoly.from_y_coefficients(new), MonicTransform(lc)


# ----------------------------------------------------------------------------
# Discriminant
# ----------------------------------------------------------------------------

def discriminant(field: FunctionField) -> Poly:
    """disc_y(p) as det of the trace form on 1, y, ..., y^(n-1)."""
    s = field.power_sums()
    n = field.n
    return poly_det([[s[i + j] for j in range(n)] for i in range(n)])


def resultant_discriminant(p: BivariatePoly) -> Poly:
    """(-1)^(n(n-1)/2) Res_y(p, dp/dy) via the Sylvester matrix; p monic in y."""
    a = p.y_coefficients()
    n = len(a) - 1
    b = [a[j + 1] * (j + 1) for j in range(n)]
    size = 2 * n - 1
    rows = []
    for i in range(n - 1):
        row = [Poly()] * size
        for j, c in enumerate(reversed(a)):
            row[i + j] = c
        rows.append(row)
    for i in range(n):
        row = [Poly()] * size
        for j, c in enumerate(reversed(b)):
            row[i + j] = c
        rows.append(row)
    res = poly_det(rows)
    return -res if (n * (n - 1) // 2) % 2 else res


# ----------------------------------------------------------------------------
# Polynomial lattice helpers
# ----------------------------------------------------------------------------

def hnf_lower(rows, n, modulus: Poly | None = None):
    """Lower-triangular Hermite form over Q[x] of a full-rank row set.

    With ``modulus`` the lattice is understood to contain modulus * Q[x]^n and
    entries are reduced modulo it along the way.
    """
    def red(row):
        return [c % modulus if c.degree >= modulus.degree else c for c in row] if modulus else row

    active = [red(list(r)) for r in rows]
    active = [r for r in active if any(r)]
    out = [None] * n
    for col in range(n - 1, -1, -1):
        if modulus is not None:
            fresh = [Poly()] * n
            fresh[col] = modulus
            active.append(fresh)
        hits = [r for r in active if r[col]]
        rest = [r for r in active if not r[col]]
        if not hits:
            raise DegenerateInput("lattice is not of full rank")
        while len(hits) > 1:
            hits.sort(key=lambda r: r[col].degree)
            piv = hits[0]
            nxt = [piv]
            for r in hits[1:]:
                q = r[col] // piv[col]
                r = red([a - q * b for a, b in zip(r, piv)])
                if r[col]:
                    nxt.append(r)
                elif any(r):
                    rest.append(r)
            hits = nxt
        piv = hits[0]
        inv = 1 / piv[col].lc
        out[col] = [c * inv for c in piv]
        active = rest
    for i in range(n):
        for j in range(i - 1, -1, -1):
            c = out[i][j]
            if c and c.degree >= out[j][j].degree:
                q = c // out[j][j]
                out[i] = [a - q * b for a, b in zip(out[i], out[j])]
    return out


def _normalize_lattice(M, den):
    """Canonical (HNF numerators, minimal monic denominator)."""
    n = len(M)
    g = den
    for row in M:
        for c in row:
            if c:
                g = poly_gcd(g, c)
                if g.degree == 0:
                    break
    if g.degree > 0:
        M = [[c.exact_div(g) for c in row] for row in M]
        den = den.exact_div(g)
    inv = 1 / den.lc
    den = den * inv
    M = [[c * inv for c in row] for row in M]
    return hnf_lower(M, n), den


def triangular_coordinates(basis_coords, target):
    """Solve sum_i c_i basis_i = target for lower-triangular basis coordinate rows."""
    n = len(basis_coords)
    rem = [RatFunc.coerce(c) for c in target]
    out = [RatFunc(0)] * n
    for i in range(n - 1, -1, -1):
        if not rem[i]:
            continue
        diag = basis_coords[i][i]
        if not diag:
            raise InternalContractViolation("basis is not triangular")
        c = rem[i] / diag
        out[i] = c
        for j in range(i + 1):
            if basis_coords[i][j]:
                rem[j] = rem[j] - c * basis_coords[i][j]
    return out


def _poly_coordinates(M, den, u, udeN):
    """Polynomial coordinates of u/udeN in the lattice (M, den); None if not a member."""
    n = len(M)
    # target numerators scaled to the lattice denominator: u * den / udeN
    rem = []
    for c in u:
        q, r = divmod(c * den, udeN)
        if r:
            return None
        rem.append(q)
    out = [Poly()] * n
    for i in range(n - 1, -1, -1):
        if not rem[i]:
            continue
        q, r = divmod(rem[i], M[i][i])
        if r:
            return None
        out[i] = q
        for j in range(i + 1):
            if M[i][j]:
                rem[j] = rem[j] - q * M[i][j]
    return out


def _mat_mul(A, B):
    n, k, m = len(A), len(B), len(B[0])
    out = [[Poly() for _ in range(m)] for _ in range(n)]
    for i in range(n):
        for t in range(k):
            a = A[i][t]
            if a:
                for j in range(m):
                    if B[t][j]:
                        out[i][j] = out[i][j] + a * B[t][j]
    return out


# ----------------------------------------------------------------------------
# Linear algebra over Q[x]/(d)
# ----------------------------------------------------------------------------

def _kernel_mod(rows, ncols, d: Poly):
    """Basis of {c : A c = 0} over Q[x]/(d); raises _Split on a zero-divisor pivot."""
    rows = [[c % d for c in r] for r in rows]
    rows = [r for r in rows if any(r)]
    pivots = []
    r = 0
    for col in range(ncols):
        piv = next((i for i in range(r, len(rows)) if rows[i][col]), None)
        if piv is None:
            continue
        a = rows[piv][col]
        g = poly_gcd(a, d)
        if g.degree > 0:
            raise _Split(g)
        rows[r], rows[piv] = rows[piv], rows[r]
        inv = mod_inverse(a, d)
        rows[r] = [(c * inv) % d if c else c for c in rows[r]]
        prow = rows[r]
        for i in range(len(rows)):
            if i != r and rows[i][col]:
                f = rows[i][col]
                rows[i] = [(c - f * pc) % d if (pc or c) else c for c, pc in zip(rows[i], prow)]
        pivots.append(col)
        r += 1
        if r == len(rows):
            break
    basis = []
    pivset = set(pivots)
    for free in range(ncols):
        if free in pivset:
            continue
        v = [Poly()] * ncols
        v[free] = Poly.const(1)
        for k, c in enumerate(pivots):
            v[c] = (-rows[k][free]) % d
        basis.append(v)
    return basis


# ----------------------------------------------------------------------------
# Round 2
# ----------------------------------------------------------------------------

def _round2_step(field: FunctionField, M, den, d: Poly):
    """One enlargement at d: the multiplier ring of the radical, or None if O is maximal at d."""
    n = field.n
    s = field.power_sums()
    hankel = [[s[i + j] for j in range(n)] for i in range(n)]
    MS = _mat_mul(M, hankel)
    Mt = [list(col) for col in zip(*M)]
    T = _mat_mul(MS, Mt)
    den2 = den * den
    T = [[c.exact_div(den2) % d for c in row] for row in T]
    radical = _kernel_mod(T, n, d)
    if not radical:
        return None
    H = hnf_lower(radical, n, modulus=d)
    IM = _mat_mul(H, M)  # radical, power-basis numerators over den
    equations = [[None] * n for _ in range(n * n)]
    for i in range(n):
        for k in range(n):
            prod = field.mul_numerators(M[i], IM[k])
            coords = _poly_coordinates(IM, den, prod, den2)
            if coords is None:
                raise InternalContractViolation("radical is not an ideal")
            for l in range(n):
                equations[k * n + l][i] = coords[l]
    kernel = _kernel_mod(equations, n, d)
    if not kernel:
        return None
    H2 = hnf_lower(kernel, n, modulus=d)
    return _normalize_lattice(_mat_mul(H2, M), den * d)


def _maximize(field, M, den, d, certified):
    while True:
        try:
            step = _round2_step(field, M, den, d)
        except _Split as split:
            g = split.factor
            M, den = _maximize(field, M, den, g, certified)
            return _maximize(field, M, den, d.exact_div(g), certified)
        if step is None:
            certified.append(d)
            return M, den
        M, den = step


def maximal_order(field: FunctionField, moduli):
    """Round 2 at each squarefree modulus; returns (M, den, certified moduli)."""
    n = field.n
    M = [[Poly.const(1) if i == j else Poly() for j in range(n)] for i in range(n)]
    den = Poly.const(1)
    certified = []
    for d in moduli:
        if d.degree > 0:
            M, den = _maximize(field, M, den, d.monic(), certified)
    return M, den, certified


def nonmaximal_moduli(disc: Poly):
    """Squarefree parts of disc whose square divides it (one per multiplicity)."""
    if disc.is_zero():
        raise DegenerateInput("zero discriminant: relation is not squarefree in y")
    return [f for f, e in squarefree_factor(disc) if e >= 2]


def _elements(field, M, den):
    return [field.from_numerators(row, den) for row in M]


def integral_basis(p: BivariatePoly) -> IntegralBasis:
    """Triangular basis of O_K over Q[x]; ``p`` must be monic in y."""
    field = FunctionField(p)
    disc = discriminant(field)
    moduli = nonmaximal_moduli(disc)
    M, den, certified = maximal_order(field, moduli)
    return IntegralBasis(_elements(field, M, den), GLOBAL, field, moduli=certified, lattice=(M, den))


def infinity_weight(p: BivariatePoly) -> int:
    """Least w with x~^(n w) p(1/x~, Y/x~^w) polynomial in x~."""
    n = p.degy
    w = 0
    for (i, j), _ in p.coeffs.items():
        if j < n:
            w = max(w, -(-i // (n - j)))
    return w


def infinity_relation(p: BivariatePoly):
    """(p~, w) with p~(x~, Y) = x~^(n w) p(1/x~, Y/x~^w), monic in Y."""
    n = p.degy
    w = infinity_weight(p)
    coeffs = {}
    for (i, j), c in p.coeffs.items():
        coeffs[(w * (n - j) - i, j)] = c
    return BivariatePoly(coeffs), w


def transport_from_infinity(elem_coords, w: int):
    """Map coordinates in Y = y/x^w over x~ = 1/x back to the y-basis over x."""
    out = []
    for j, c in enumerate(elem_coords):
        c = RatFunc.coerce(c).substitute_inverse()
        out.append(c * RatFunc(Poly.const(1), Poly.monomial(w * j)) if c else c)
    return out


def infinity_basis(p: BivariatePoly) -> IntegralBasis:
    """Basis of O_inf over R_inf: local basis at x~ = 0 of the transformed relation."""
    field = FunctionField(p)
    pt, w = infinity_relation(p)
    local_field = FunctionField(pt)
    M, den, certified = maximal_order(local_field, [Poly.x()])
    elems = []
    for row in M:
        coords = [RatFunc(c, den) for c in row]
        elems.append(field.element(transport_from_infinity(coords, w)))
    return IntegralBasis(elems, AT_INFINITY, field, moduli=certified, weight=w, lattice=(M, den))


def check_integral_basis(basis: IntegralBasis) -> bool:
    test = is_integral if basis.kind == GLOBAL else is_integral_at_infinity
    return all(test(e) for e in basis.elems)


def basis_discriminant(basis: IntegralBasis) -> RatFunc:
    """det of the trace form Tr(b_i b_j) over Q(x)."""
    M, den = basis.lattice if basis.kind == GLOBAL else (None, None)
    if M is None:
        raise ValueError("discriminant is only tracked for global bases")
    d = discriminant(basis.field)
    diag = Poly.const(1)
    for i, row in enumerate(M):
        diag = diag * row[i]
    n = len(M)
    return RatFunc(d * diag * diag, den ** (2 * n))
