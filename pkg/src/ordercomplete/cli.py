"""Command-line entry point.

    ordercomplete series RECIPE [--trunc T]
    ordercomplete relation T_RECIPE F_RECIPE [--trunc T]
    ordercomplete basis RELATION --t T_RECIPE --f F_RECIPE [--d D]
    ordercomplete express BASIS_JSON TARGET_RECIPE [--trunc T]
    ordercomplete congruence A B M COUNT
    ordercomplete example {1,2} [--out DIR]

Exit codes: 0 ok, 1 check failed, 2 parse error, 3 evaluation error,
4 coprimality, 5 precision, 6 degenerate input, 7 gap, 8 internal.
"""

from __future__ import annotations

import argparse
import json
import sys
from importlib import resources
from pathlib import Path

from . import __version__
from .basis_rr import OrderCompleteBasis, element_to_json, order_complete_basis
from .errors import DegenerateInput, InsufficientPrecision, InternalContractViolation, OrderCompleteError, ParseError
from .exact import Poly, QQ, format_rational
from .funcfield import FunctionField, SeriesContext
from .intbasis import integral_basis, infinity_basis, make_monic
from .normalize import normalize_at_infinity
from .qseries import format_series
from .recipe import Recipe, load_recipe, parse_recipe
from .reduce import DEFAULT_WINDOW, check_congruence, closed_form, decompose, verify_identity
from .relation import BivariatePoly, ansatz_precision, find_relation, verify_relation

FORMAT_VERSION = 1


def _emit(text: str, out: str | None):
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _dump(data) -> str:
    return json.dumps(data, indent=2) + "\n"


def _read_relation(path) -> BivariatePoly:
    try:
        return BivariatePoly.parse(Path(path).read_text())
    except ValueError as exc:
        raise ParseError(f"{path}: {exc}") from None


# ----------------------------------------------------------------------------
# series
# ----------------------------------------------------------------------------

def series_lines(recipe: Recipe, T: int) -> str:
    s = recipe.series(T)
    lines = [f"q^{k}: {format_rational(s[k])}" for k in range(s.valuation, T)]
    lines.append(f"O(q^{T})")
    return "\n".join(lines) + "\n"


def cmd_series(args) -> int:
    recipe = load_recipe(args.recipe)
    if args.format == "json":
        s = recipe.series(args.trunc)
        text = _dump(
            {
                "valuation": s.valuation,
                "trunc": args.trunc,
                "coefficients": [format_rational(s[k]) for k in range(s.valuation, args.trunc)],
            }
        )
    else:
        text = series_lines(recipe, args.trunc)
    _emit(text, args.out)
    return 0


# ----------------------------------------------------------------------------
# relation
# ----------------------------------------------------------------------------

def derive_relation(t: Recipe, f: Recipe, T: int | None = None) -> BivariatePoly:
    n = -t.series(1).valuation
    m = -f.series(1).valuation
    W = T if T is not None else ansatz_precision(n, m) + 1
    p = find_relation(t.series(W), f.series(W))
    # p(t, f) loses up to deg_y * pole(f) + deg_x * pole(t) orders of precision
    lift = W + p.degy * m + p.degx * n
    residual = verify_relation(p, t.series(lift), f.series(lift), W)
    if residual < W:
        raise InsufficientPrecision(f"relation fails at q^{residual}")
    print(f"relation: degx={p.degx} degy={p.degy} residual O(q^{residual})", file=sys.stderr)
    return p


def cmd_relation(args) -> int:
    p = derive_relation(load_recipe(args.t_recipe), load_recipe(args.f_recipe), args.trunc)
    _emit(p.serialize() if args.format == "text" else _dump({"terms": [[i, j, str(c)] for (i, j), c in sorted(p.coeffs.items())]}), args.out)
    return 0


# ----------------------------------------------------------------------------
# basis
# ----------------------------------------------------------------------------

class Pipeline:
    """Relation, field, and series context for a pair of generator recipes."""

    def __init__(self, p: BivariatePoly, t: Recipe, f: Recipe):
        self.original = p
        self.t_recipe = t
        self.f_recipe = f
        monic, transform = make_monic(p)
        self.transform = transform
        self.field = FunctionField(monic)
        y_map = None if transform.is_identity() else transform.y_series
        self.ctx = SeriesContext(t, f, y_map)

    def normalized(self):
        glob = integral_basis(self.field.p)
        at_inf = infinity_basis(self.field.p)
        return normalize_at_infinity(glob, at_inf)

    def header(self) -> dict:
        return {
            "format": FORMAT_VERSION,
            "relation": self.original.serialize(),
            "t_recipe": self.t_recipe.text,
            "f_recipe": self.f_recipe.text,
            "monic_factor": [format_rational(c) for c in self.transform.lc.coeffs],
        }


def basis_json(pipe: Pipeline, d: int, T: int):
    nb = pipe.normalized()
    ocb = order_complete_basis(nb, d, pipe.ctx, T)
    data = pipe.header()
    data["normalized"] = {"d": list(nb.d), "elements": [element_to_json(b) for b in nb.b]}
    data.update(ocb.to_json(window=T))
    return data, nb, ocb


def cmd_basis(args) -> int:
    if args.d < 0:
        raise DegenerateInput("--d must be non-negative")
    pipe = Pipeline(_read_relation(args.relation), load_recipe(args.t), load_recipe(args.f))
    data, _, ocb = basis_json(pipe, args.d, args.trunc)
    if args.format == "json":
        text = _dump(data)
    else:
        lines = [f"d = {ocb.d_used}", f"gaps = {sorted(ocb.gaps)}"]
        for e in ocb:
            lines.append(f"order {e.pole_order}: {format_series(e.series)}")
            lines.append(f"    = {e.expr}")
        text = "\n".join(lines) + "\n"
    _emit(text, args.out)
    return 0


def load_basis(data: dict):
    p = BivariatePoly.parse(data["relation"])
    pipe = Pipeline(p, parse_recipe(data["t_recipe"], "t"), parse_recipe(data["f_recipe"], "f"))
    expected = Poly([QQ(c) for c in data.get("monic_factor", ["1"])])
    if expected != pipe.transform.lc:
        raise ParseError("basis file: monic_factor does not match the relation")
    return pipe, OrderCompleteBasis.from_json(data, pipe.field)


# ----------------------------------------------------------------------------
# express
# ----------------------------------------------------------------------------

def express_json(pipe: Pipeline, ocb: OrderCompleteBasis, target: Recipe, T: int) -> dict:
    dec, basis = decompose(target, ocb, pipe.ctx, window=T)
    cf = closed_form(dec, basis, pipe.field)
    residual = verify_identity(target, cf, pipe.ctx, T)
    if residual < T:
        raise InternalContractViolation(f"closed form differs from the target at q^{residual}")
    data = dec.to_json(basis)
    data["closed_form"] = str(cf)
    data["closed_form_coords"] = element_to_json(cf)
    data["identity"] = {"trunc": T, "residual_valuation": residual, "pass": residual >= T}
    return data


def cmd_express(args) -> int:
    try:
        data = json.loads(Path(args.basis).read_text())
    except json.JSONDecodeError as exc:
        raise ParseError(f"{args.basis}: {exc.msg}", (exc.lineno, exc.colno)) from None
    pipe, ocb = load_basis(data)
    target = load_recipe(args.target)
    out = express_json(pipe, ocb, target, args.trunc)
    if args.format == "json":
        text = _dump(out)
    else:
        lines = [f"order {t['order']}: {t['coefficient']}" for t in out["terms"]]
        lines.append(f"residual O(q^{out['residual_valuation']})")
        lines.append(f"identity through O(q^{args.trunc}): {'PASS' if out['identity']['pass'] else 'FAIL'}")
        text = "\n".join(lines) + "\n"
    _emit(text, args.out)
    return 0


# ----------------------------------------------------------------------------
# congruence
# ----------------------------------------------------------------------------

def cmd_congruence(args) -> int:
    bad = check_congruence(args.a, args.b, args.m, args.count)
    head = f"p({args.a}n+{args.b}) mod {args.m}, 0 <= n < {args.count}"
    if args.format == "json":
        text = _dump({"a": args.a, "b": args.b, "m": args.m, "count": args.count, "violations": bad})
    elif bad:
        text = f"{head}: FAIL, violations at n = {', '.join(map(str, bad))}\n"
    else:
        text = f"{head}: PASS\n"
    _emit(text, args.out)
    return 1 if bad else 0


# ----------------------------------------------------------------------------
# bundled examples
# ----------------------------------------------------------------------------

def example_recipe(example: int, name: str) -> Recipe:
    ref = resources.files("ordercomplete") / "data" / f"example{example}" / f"{name}.rcp"
    return parse_recipe(ref.read_text(), f"example{example}/{name}.rcp")


def cmd_example(args) -> int:
    t, f, h = (example_recipe(args.example, k) for k in ("t", "f", "h"))
    outdir = Path(args.out or f"example{args.example}-out")
    outdir.mkdir(parents=True, exist_ok=True)
    p = derive_relation(t, f)
    (outdir / "relation.txt").write_text(p.serialize())
    pipe = Pipeline(p, t, f)
    data, _, ocb = basis_json(pipe, args.d, 3)
    (outdir / "basis.json").write_text(_dump(data))
    out = express_json(pipe, ocb, h, args.trunc)
    (outdir / "decomposition.json").write_text(_dump(out))
    print(f"relation: {p}")
    print(f"basis: orders {ocb.orders}, gaps {sorted(ocb.gaps)}")
    for term in out["terms"]:
        print(f"  order {term['order']}: {term['coefficient']}")
    print(f"identity through O(q^{args.trunc}): {'PASS' if out['identity']['pass'] else 'FAIL'}")
    print(f"files written to {outdir}")
    return 0


# ----------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="ordercomplete", description="Order-complete bases of modular functions.")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(sp, trunc):
        sp.add_argument("--trunc", type=int, default=trunc, help="truncation order T")
        sp.add_argument("--format", choices=("text", "json"), default="text")
        sp.add_argument("--out", help="write to this file instead of stdout")

    sp = sub.add_parser("series", help="expand a recipe")
    sp.add_argument("recipe")
    common(sp, 3)
    sp.set_defaults(func=cmd_series)

    sp = sub.add_parser("relation", help="find p with p(t, f) = 0")
    sp.add_argument("t_recipe")
    sp.add_argument("f_recipe")
    common(sp, None)
    sp.set_defaults(func=cmd_relation)

    sp = sub.add_parser("basis", help="order-complete basis of O_K ∩ x^d O_inf")
    sp.add_argument("relation")
    sp.add_argument("--t", required=True, help="recipe of t (the x coordinate)")
    sp.add_argument("--f", required=True, help="recipe of f (the y coordinate)")
    sp.add_argument("--d", type=int, default=1)
    common(sp, 3)
    sp.set_defaults(func=cmd_basis, format="json")

    sp = sub.add_parser("express", help="decompose a target over a basis")
    sp.add_argument("basis")
    sp.add_argument("target")
    common(sp, DEFAULT_WINDOW)
    sp.set_defaults(func=cmd_express, format="json")

    sp = sub.add_parser("congruence", help="check p(a n + b) = 0 mod m")
    for name in ("a", "b", "m", "count"):
        sp.add_argument(name, type=int)
    common(sp, None)
    sp.set_defaults(func=cmd_congruence)

    sp = sub.add_parser("example", help="run a bundled example end to end")
    sp.add_argument("example", type=int, choices=(1, 2))
    sp.add_argument("--d", type=int, default=1)
    sp.add_argument("--trunc", type=int, default=100)
    sp.add_argument("--out", help="output directory")
    sp.set_defaults(func=cmd_example)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    print(f"ordercomplete {__version__}", file=sys.stderr)
    trunc = getattr(args, "trunc", None)
    if trunc is not None and trunc < 1:
        print("error: --trunc must be at least 1", file=sys.stderr)
        return 2
    try:
        return args.func(args)
    except OrderCompleteError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.exit_code
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
