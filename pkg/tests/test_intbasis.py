import pytest
import sympy

from ordercomplete.errors import DegenerateInput
from ordercomplete.exact import Poly, RatFunc, poly_det, squarefree_factor
from ordercomplete.funcfield import FunctionField, is_integral, is_integral_at_infinity, trace_matrix
from ordercomplete.intbasis import (
    _round2_step,
    basis_discriminant,
    check_integral_basis,
    discriminant,
    hnf_lower,
    infinity_basis,
    infinity_relation,
    infinity_weight,
    integral_basis,
    make_monic,
    nonmaximal_moduli,
    resultant_discriminant,
)
from ordercomplete.relation import BivariatePoly

from oracles import sympy_poly, sympy_relation

PARABOLA = BivariatePoly({(0, 2): 1, (1, 0): -1})  # y^2 - x
NODE = BivariatePoly({(0, 2): 1, (2, 0): -1, (3, 0): -1})  # y^2 - x^2 (x + 1)
CUSP = BivariatePoly({(0, 2): 1, (3, 0): -1})  # y^2 - x^3


def coords_are_polynomial(basis, elem):
    return all(c.is_polynomial() for c in basis.coordinates(elem))


def is_square(poly):
    return all(k % 2 == 0 for _, k in squarefree_factor(poly)) if poly.degree > 0 else True


def test_parabola():
    B = integral_basis(PARABOLA)
    K = B.field
    assert B.elems == [K.one(), K.y()]
    I = infinity_basis(PARABOLA)
    assert I.elems == [K.one(), K.y() / K.x()]
    assert I.weight == 1


def test_node():
    B = integral_basis(NODE)
    K = B.field
    assert B.elems == [K.one(), K.y() / K.x()]
    assert check_integral_basis(B)


def test_cusp():
    B = integral_basis(CUSP)
    K = B.field
    assert B.elems == [K.one(), K.y() / K.x()]


def test_zero_discriminant_rejected():
    square = BivariatePoly({(0, 2): 1, (1, 1): -2, (2, 0): 1})  # (y - x)^2
    with pytest.raises(DegenerateInput):
        integral_basis(square)


def test_make_monic():
    p, tr = make_monic(NODE)
    assert p == NODE and tr.is_identity()
    p, tr = make_monic(BivariatePoly({(0, 2): 2, (1, 0): -1}))
    assert p == BivariatePoly({(0, 2): 1, (1, 0): -2})
    assert tr.lc == Poly.const(2)
    p, tr = make_monic(BivariatePoly({(1, 2): 1, (0, 0): -1}))
    assert p == BivariatePoly({(0, 2): 1, (1, 0): -1})
    assert tr.lc == Poly.x()


def test_squarefree_factor_of_discriminant(ex1):
    disc = discriminant(ex1.field)
    assert disc == resultant_discriminant(ex1.p)
    parts = squarefree_factor(disc)
    assert any(k >= 2 for _, k in parts)
    expr, x, y = sympy_relation(ex1.p)
    ref = sympy.discriminant(expr, y)
    assert sympy.expand(sympy_poly(disc, x) - ref) == 0


def test_infinity_relation(ex1):
    pt, w = infinity_relation(ex1.p)
    assert w == infinity_weight(ex1.p) == 2
    assert pt.is_monic_in_y()
    # every coefficient stays polynomial in x~
    assert all(i >= 0 for i, _ in pt.coeffs)


@pytest.mark.parametrize("name", ["ex1", "ex2"])
def test_global_basis_contract(name, request):
    ex = request.getfixturevalue(name)
    B = ex.glob
    K = ex.field
    for i, b in enumerate(B):
        assert b.y_degree() == i
    assert all(is_integral(b) for b in B)
    for j in range(K.n):
        assert coords_are_polynomial(B, K.y_power(j))
    for d in B.moduli:
        M, den = B.lattice
        assert _round2_step(K, M, den, d) is None


@pytest.mark.parametrize("name", ["ex1", "ex2"])
def test_index_formula(name, request):
    ex = request.getfixturevalue(name)
    disc = discriminant(ex.field)
    bd = basis_discriminant(ex.glob)
    assert bd.is_polynomial()
    q, r = divmod(disc, bd.num)
    assert r.is_zero()
    assert is_square(q)
    # what is left is the discriminant of the curve's function field: no square factor
    assert all(k == 1 for f, k in squarefree_factor(bd.num) if f != Poly.x())


def test_basis_discriminant_against_trace_form(ex1):
    tm = trace_matrix(ex1.glob.elems)
    den = Poly.const(1)
    for row in tm:
        for c in row:
            assert c.is_polynomial()
    det = poly_det([[c.num for c in row] for row in tm])
    assert RatFunc(det) == basis_discriminant(ex1.glob)


def test_module_equality_with_closed_forms(ex1, closed_b):
    B = ex1.glob
    for b in closed_b.values():
        assert coords_are_polynomial(B, b)


def test_infinity_basis_contract(ex1):
    I = ex1.inf
    assert all(is_integral_at_infinity(b) for b in I)
    assert I.elems[0] == ex1.field.one()
    K = ex1.field
    assert is_integral_at_infinity(K.y() / K.x() ** I.weight)
    assert is_integral_at_infinity(K.one() / K.x())
    assert not is_integral_at_infinity(K.x())


def test_idempotent_hnf():
    x = Poly.x()
    rows = [[x * x, Poly()], [x + 1, x]]
    once = hnf_lower(rows, 2)
    assert hnf_lower(once, 2) == once


def test_nonmaximal_moduli():
    x = Poly.x()
    disc = x**3 * (x + 1) * (x - 2) ** 2
    assert nonmaximal_moduli(disc) == [x - 2, x]
    with pytest.raises(DegenerateInput):
        nonmaximal_moduli(Poly())
