"""Normalize an integral basis at infinity.

Given a Q[x]-basis b_i of O_K and an R_inf-basis b'_j of O_inf, rewrite the
b_i until the leading-coefficient vectors of their b'-coordinates are
linearly independent.  The exponents d_i are then minimal with
b_i in x^(d_i) O_inf, and sums never cancel in leading behaviour.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .errors import InternalContractViolation
from .exact import Poly, nullspace, poly_det, poly_lcm
from .funcfield import FieldElement
from .intbasis import IntegralBasis


@dataclass
class CoordMatrix:
    """D * b_i = sum_j a[i][j] * b'_j."""

    a: list
    D: Poly


@dataclass
class NormalizedBasis:
    b: list
    d: list
    coords: CoordMatrix
    # transform[i] holds the coefficients of b_i in the input global basis
    transform: list = field(default_factory=list)
    history: list = field(default_factory=list)

    def __len__(self):
        return len(self.b)

    def serialize(self) -> str:
        out = ["d " + " ".join(str(v) for v in self.d) + "\n"]
        for k, e in enumerate(self.b):
            out.append(f"element {k}\n")
            out.append(e.serialize())
        return "".join(out)


def coordinate_matrix(elems, at_inf: IntegralBasis) -> CoordMatrix:
    """Coordinates r_ij of each element at infinity and the monic lcm D of their denominators."""
    r = [at_inf.coordinates(b) for b in elems]
    D = Poly.const(1)
    for row in r:
        for c in row:
            if c:
                D = poly_lcm(D, c.den)
    a = [[(c.num * D.exact_div(c.den)) if c else Poly() for c in row] for row in r]
    return CoordMatrix(a, D)


def leading_data(row, D: Poly):
    """(m_i, V_i, d_i) for one row of the coordinate matrix."""
    m = max(c.degree for c in row)
    return m, [c[m] for c in row], m - D.degree


def _row_content(*rows):
    coeffs = [c for row in rows for poly in row for c in poly.coeffs]
    return Poly(coeffs).content() if coeffs else None


def _from_coordinates(a, D: Poly, at_inf: IntegralBasis):
    """Elements (1/D) * sum_j a[i][j] * b'_j, assembled on numerators."""
    field = at_inf.field
    parts = [e.numden() for e in at_inf.elems]
    E = Poly.const(1)
    for _, e in parts:
        E = poly_lcm(E, e)
    lifted = [[c * E.exact_div(e) for c in u] for u, e in parts]
    out = []
    for row in a:
        nums = [Poly()] * field.n
        for coef, u in zip(row, lifted):
            if coef:
                nums = [x + coef * y for x, y in zip(nums, u)]
        out.append(field.from_numerators(nums, D * E))
    return out


def normalize_at_infinity(global_basis: IntegralBasis, at_inf: IntegralBasis) -> NormalizedBasis:
    """Runs on the coordinate matrix; elements are rebuilt once at the end.

    Rows changed by a dependency step are divided by their rational content, which keeps
    a Q[x]-basis and the exponents d_i while holding coefficient growth down.
    """
    b = list(global_basis.elems)
    n = len(b)
    cm = coordinate_matrix(b, at_inf)
    a, D = [list(row) for row in cm.a], cm.D
    for i, row in enumerate(a):
        if not any(row):
            raise InternalContractViolation(f"basis element {i} has no coordinates at infinity")
    transform = [[Poly.const(1) if i == j else Poly() for j in range(n)] for i in range(n)]
    history = []
    changed = False
    while True:
        data = [leading_data(row, D) for row in a]
        d = [t[2] for t in data]
        history.append(list(d))
        vmat = [[data[i][1][j] for i in range(n)] for j in range(n)]
        deps = nullspace(vmat, n)
        if not deps:
            break
        changed = True
        c = deps[0]
        target = max(range(n), key=lambda i: (d[i] if c[i] else float("-inf"), -i))
        di = d[target]
        new_a = [Poly()] * n
        new_t = [Poly()] * n
        for k in range(n):
            if not c[k]:
                continue
            mult = Poly.monomial(di - d[k], c[k])
            new_a = [x + mult * y for x, y in zip(new_a, a[k])]
            new_t = [x + mult * y for x, y in zip(new_t, transform[k])]
        g = _row_content(new_a)
        a[target] = [x * (1 / g) for x in new_a]
        transform[target] = [x * (1 / g) for x in new_t]
    if changed:
        b = _from_coordinates(a, D, at_inf)
    return NormalizedBasis(b, d, CoordMatrix(a, D), transform, history)


def independent_leading_vectors(nb: NormalizedBasis) -> bool:
    n = len(nb.b)
    data = [leading_data(row, nb.coords.D) for row in nb.coords.a]
    vmat = [[data[i][1][j] for i in range(n)] for j in range(n)]
    return not nullspace(vmat, n)


def transform_determinant(nb: NormalizedBasis) -> Poly:
    return poly_det(nb.transform)


def minimal_d(elem: FieldElement, at_inf: IntegralBasis) -> int:
    """Smallest d with x^-d * elem in the R_inf-span of ``at_inf``."""
    if elem.is_zero():
        raise ValueError("minimal_d of zero")
    return max(c.degree for c in at_inf.coordinates(elem) if c)
