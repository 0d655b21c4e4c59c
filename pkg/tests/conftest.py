from __future__ import annotations

from importlib import resources
from types import SimpleNamespace

import pytest

from ordercomplete.basis_rr import order_complete_basis
from ordercomplete.exact import QQ
from ordercomplete.funcfield import FunctionField, SeriesContext
from ordercomplete.intbasis import infinity_basis, integral_basis
from ordercomplete.normalize import normalize_at_infinity
from ordercomplete.recipe import parse_recipe
from ordercomplete.relation import BivariatePoly


def data_text(example, name):
    return (resources.files("ordercomplete") / "data" / f"example{example}" / name).read_text()


def recipe(example, name):
    return parse_recipe(data_text(example, f"{name}.rcp"), f"example{example}/{name}")


def build_example(example):
    ns = SimpleNamespace()
    ns.t, ns.f, ns.h = (recipe(example, k) for k in ("t", "f", "h"))
    ns.p = BivariatePoly.parse(data_text(example, "relation.txt"))
    ns.field = FunctionField(ns.p)
    ns.glob = integral_basis(ns.p)
    ns.inf = infinity_basis(ns.p)
    ns.nb = normalize_at_infinity(ns.glob, ns.inf)
    ns.ctx = SeriesContext(ns.t, ns.f)
    ns.ocb = order_complete_basis(ns.nb, 1, ns.ctx, T=3)
    return ns


@pytest.fixture(scope="session")
def ex1():
    return build_example(1)


@pytest.fixture(scope="session")
def ex2():
    return build_example(2)


@pytest.fixture(scope="session")
def closed_b(ex1):
    """b_2, b_3, b_4 as closed forms in t and f, built in the field."""
    K = ex1.field
    t, f = K.x(), K.y()
    A = (t - 1331) / (f + t * 47)
    B = (t + 1331) / (f * f + f * t * 89 + t * t * 1424)
    pref = t * (QQ(5) / 22)
    return {
        2: 12 + pref * (A - (t * 42 + f) * B),
        3: 12 + pref * (A * 3 - (t * 16 + f * 3) * B),
        4: 12 + pref * (A * -3 - (t * 28 + f * 19) * B),
    }

