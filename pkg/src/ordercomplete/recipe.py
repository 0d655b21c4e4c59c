"""Series recipes: a small s-expression language for q-series definitions.

Grammar::

    program    = { definition } expr
    definition = "(" "define" NAME expr ")"
    expr       = NUMBER | NAME | "(" op { expr } ")"
    NUMBER     = ["-"] digits [ "/" digits ]
    op         = "euler" | "q" | "partitions" | "d/dq" | "+" | "-" | "*" | "/" | "^"

Atoms ``E4``, ``Delta``, ``J`` and ``q`` name the usual series; any other
NAME must be introduced by an earlier ``define``.  ``;`` starts a comment.

    (euler d e)        prod_{n>=1} (1 - q^(d n))^e
    (q k)              q^k
    (partitions a b)   sum_{n>=0} p(a n + b) q^n
    (d/dq e)           derivative in q
    (^ e k)            integer power, k may be negative
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field

from .errors import EvaluationError, ParseError, SeriesDivisionError
from .exact import QQ, Rational, format_rational
from .qseries import (
    LaurentSeries,
    delta_series,
    eisenstein_e4,
    euler_product,
    j_invariant,
    partition_slice,
    series_derivative,
    series_inv,
    series_mul,
    series_pow,
)


# ----------------------------------------------------------------------------
# Tree
# ----------------------------------------------------------------------------

class Node:
    __slots__ = ()


@dataclass(frozen=True)
class Const(Node):
    value: Rational


@dataclass(frozen=True)
class QPower(Node):
    k: int


@dataclass(frozen=True)
class EulerProduct(Node):
    delta: int
    exponent: int


@dataclass(frozen=True)
class E4(Node):
    pass


@dataclass(frozen=True)
class Delta(Node):
    pass


@dataclass(frozen=True)
class J(Node):
    pass


@dataclass(frozen=True)
class PartitionSlice(Node):
    a: int
    b: int


@dataclass(frozen=True)
class Derivative(Node):
    arg: Node


@dataclass(frozen=True)
class Sum(Node):
    terms: tuple


@dataclass(frozen=True)
class Product(Node):
    factors: tuple


@dataclass(frozen=True)
class Power(Node):
    base: Node
    k: int


@dataclass(frozen=True)
class Scale(Node):
    c: Rational
    arg: Node


def to_text(node: Node) -> str:
    """Render a tree back to recipe syntax."""
    if isinstance(node, Const):
        return format_rational(node.value)
    if isinstance(node, QPower):
        return f"(q {node.k})"
    if isinstance(node, EulerProduct):
        return f"(euler {node.delta} {node.exponent})"
    if isinstance(node, (E4, Delta, J)):
        return type(node).__name__
    if isinstance(node, PartitionSlice):
        return f"(partitions {node.a} {node.b})"
    if isinstance(node, Derivative):
        return f"(d/dq {to_text(node.arg)})"
    if isinstance(node, Sum):
        return "(+ " + " ".join(to_text(t) for t in node.terms) + ")"
    if isinstance(node, Product):
        return "(* " + " ".join(to_text(t) for t in node.factors) + ")"
    if isinstance(node, Power):
        return f"(^ {to_text(node.base)} {node.k})"
    if isinstance(node, Scale):
        return f"(* {format_rational(node.c)} {to_text(node.arg)})"
    raise TypeError(f"unknown recipe node {node!r}")


# ----------------------------------------------------------------------------
# Parser
# ----------------------------------------------------------------------------

_TOKEN = re.compile(r"\s+|;[^\n]*|\(|\)|[^\s();]+")
_NUMBER = re.compile(r"^-?\d+(/\d+)?$")


@dataclass
class _Tok:
    text: str
    pos: tuple


def _tokenize(text):
    tokens = []
    line, col = 1, 1
    i = 0
    while i < len(text):
        m = _TOKEN.match(text, i)
        chunk = m.group(0)
        if not chunk.isspace() and not chunk.startswith(";"):
            tokens.append(_Tok(chunk, (line, col)))
        for ch in chunk:
            if ch == "\n":
                line, col = line + 1, 1
            else:
                col += 1
        i = m.end()
    return tokens


def _read(tokens, i):
    """Read one s-expression; returns (value, next index).  Lists keep their open token."""
    if i >= len(tokens):
        pos = tokens[-1].pos if tokens else (1, 1)
        raise ParseError("unexpected end of input", pos)
    tok = tokens[i]
    if tok.text == ")":
        raise ParseError("unexpected ')'", tok.pos)
    if tok.text != "(":
        return tok, i + 1
    items = []
    i += 1
    while True:
        if i >= len(tokens):
            raise ParseError("unclosed '('", tok.pos)
        if tokens[i].text == ")":
            return (tok, items), i + 1
        item, i = _read(tokens, i)
        items.append(item)


def _pos(sx):
    return sx[0].pos if isinstance(sx, tuple) else sx.pos


def _int(sx, what):
    if isinstance(sx, tuple) or not re.fullmatch(r"-?\d+", sx.text):
        raise ParseError(f"{what} must be an integer", _pos(sx))
    return int(sx.text)


_ATOMS = {"E4": E4(), "Delta": Delta(), "J": J(), "q": QPower(1)}


def _build(sx, env):
    if not isinstance(sx, tuple):
        text = sx.text
        if _NUMBER.match(text):
            return Const(QQ(text))
        if text in env:
            return env[text]
        if text in _ATOMS:
            return _ATOMS[text]
        raise ParseError(f"unknown name {text!r}", sx.pos)
    open_tok, items = sx
    if not items:
        raise ParseError("empty expression", open_tok.pos)
    head = items[0]
    if isinstance(head, tuple):
        raise ParseError("operator must be a name", _pos(head))
    op, args = head.text, items[1:]

    def arity(k):
        if len(args) != k:
            raise ParseError(f"'{op}' takes {k} argument(s), got {len(args)}", head.pos)

    if op == "euler":
        arity(2)
        delta = _int(args[0], "euler delta")
        if delta < 1:
            raise ParseError("euler delta must be >= 1", _pos(args[0]))
        return EulerProduct(delta, _int(args[1], "euler exponent"))
    if op == "q":
        arity(1)
        return QPower(_int(args[0], "q exponent"))
    if op == "partitions":
        arity(2)
        a = _int(args[0], "partition step")
        if a < 1:
            raise ParseError("partition step must be >= 1", _pos(args[0]))
        return PartitionSlice(a, _int(args[1], "partition offset"))
    if op in ("E4", "Delta", "J"):
        arity(0)
        return _ATOMS[op]
    if op == "d/dq":
        arity(1)
        return Derivative(_build(args[0], env))
    if op == "^":
        arity(2)
        return Power(_build(args[0], env), _int(args[1], "power"))
    if op in ("+", "-", "*", "/"):
        if not args:
            raise ParseError(f"'{op}' needs arguments", head.pos)
        parts = [_build(a, env) for a in args]
        if op == "+":
            return parts[0] if len(parts) == 1 else Sum(tuple(parts))
        if op == "-":
            if len(parts) == 1:
                return Scale(QQ(-1), parts[0])
            return Sum((parts[0],) + tuple(Scale(QQ(-1), p) for p in parts[1:]))
        if op == "*":
            return _product(parts)
        if len(parts) != 2:
            raise ParseError("'/' takes 2 arguments", head.pos)
        num, den = parts
        if isinstance(den, Const):
            if not den.value:
                raise ParseError("division by zero", _pos(args[1]))
            return _product([num, Const(1 / den.value)])
        return _product([num, Power(den, -1)])
    if op == "define":
        raise ParseError("'define' is only allowed at top level", head.pos)
    raise ParseError(f"unknown operator {op!r}", head.pos)


def _product(parts):
    scalar = QQ(1)
    rest = []
    for p in parts:
        if isinstance(p, Const):
            scalar *= p.value
        else:
            rest.append(p)
    if not rest:
        return Const(scalar)
    body = rest[0] if len(rest) == 1 else Product(tuple(rest))
    return body if scalar == 1 else Scale(scalar, body)


@dataclass
class Recipe:
    root: Node
    definitions: dict
    text: str
    name: str = "recipe"
    _evaluator: object = field(default=None, repr=False, compare=False)

    def series(self, trunc: int) -> LaurentSeries:
        """Expansion to exactly O(q^trunc); repeated calls share one cache."""
        if self._evaluator is None:
            self._evaluator = Evaluator()
        s = self._evaluator.evaluate(self.root, trunc)
        return s.truncate(trunc) if s.trunc is None else s

    def __str__(self):
        return to_text(self.root)


def parse_recipe(text: str, name: str = "recipe") -> Recipe:
    tokens = _tokenize(text)
    if not tokens:
        raise ParseError("empty recipe", (1, 1))
    forms = []
    i = 0
    while i < len(tokens):
        sx, i = _read(tokens, i)
        forms.append(sx)
    env = {}
    for sx in forms[:-1]:
        if not (isinstance(sx, tuple) and sx[1] and not isinstance(sx[1][0], tuple) and sx[1][0].text == "define"):
            raise ParseError("only definitions may precede the final expression", _pos(sx))
        items = sx[1]
        if len(items) != 3 or isinstance(items[1], tuple):
            raise ParseError("expected (define NAME expr)", _pos(sx))
        env[items[1].text] = _build(items[2], env)
    root = _build(forms[-1], env)
    return Recipe(root, env, text, name)


def load_recipe(path) -> Recipe:
    with open(path) as fh:
        return parse_recipe(fh.read(), name=str(path))


# ----------------------------------------------------------------------------
# Evaluation
# ----------------------------------------------------------------------------

_VALUATION_CAP = 1 << 14


class Evaluator:
    """Evaluates recipe trees, raising child precision so results reach O(q^T)."""

    def __init__(self):
        self._cache = {}
        self._vals = {}

    def valuation(self, node: Node) -> int:
        if node in self._vals:
            return self._vals[node]
        if isinstance(node, QPower):
            v = node.k
        elif isinstance(node, (EulerProduct, E4)):
            v = 0
        elif isinstance(node, Delta):
            v = 1
        elif isinstance(node, J):
            v = -1
        elif isinstance(node, Const):
            if not node.value:
                raise SeriesDivisionError("valuation of the zero constant")
            v = 0
        else:
            trunc = 1
            while True:
                s = self.evaluate(node, trunc)
                if not s.is_zero():
                    v = s.valuation
                    break
                trunc = max(2 * trunc, trunc + 8)
                if trunc > _VALUATION_CAP:
                    raise SeriesDivisionError(f"series vanishes to O(q^{_VALUATION_CAP}); cannot divide by it")
        self._vals[node] = v
        return v

    def evaluate(self, node: Node, trunc: int) -> LaurentSeries:
        hit = self._cache.get(node)
        if hit is not None and (hit.trunc is None or hit.trunc >= trunc):
            return hit if hit.trunc is None else hit.truncate(trunc)
        s = self._compute(node, trunc)
        if s.trunc is not None and s.trunc < trunc:
            raise EvaluationError(f"internal precision bookkeeping fell short for {to_text(node)}")
        if s.trunc is not None:
            s = s.truncate(trunc)
        self._cache[node] = s
        return s

    def _compute(self, node, T):
        if isinstance(node, Const):
            return LaurentSeries.constant(node.value) if node.value else LaurentSeries.zero()
        if isinstance(node, QPower):
            return LaurentSeries.monomial(node.k)
        if isinstance(node, EulerProduct):
            return euler_product(node.delta, node.exponent, T)
        if isinstance(node, E4):
            return eisenstein_e4(T)
        if isinstance(node, Delta):
            return delta_series(T)
        if isinstance(node, J):
            return j_invariant(T)
        if isinstance(node, PartitionSlice):
            if node.a < 1:
                raise EvaluationError(f"partition step must be >= 1, got {node.a}")
            return partition_slice(node.a, node.b, T)
        if isinstance(node, Derivative):
            return series_derivative(self.evaluate(node.arg, T + 1))
        if isinstance(node, Scale):
            return self.evaluate(node.arg, T) * node.c
        if isinstance(node, Sum):
            acc = LaurentSeries.zero()
            for term in node.terms:
                acc = acc + self.evaluate(term, T)
            return acc
        if isinstance(node, Product):
            vals = [self.valuation(f) for f in node.factors]
            total = sum(vals)
            if T <= total:
                return LaurentSeries.zero(T)
            acc = LaurentSeries.constant(1)
            for f, v in zip(node.factors, vals):
                acc = series_mul(acc, self.evaluate(f, T - total + v))
            return acc
        if isinstance(node, Power):
            k = node.k
            if k == 0:
                return LaurentSeries.constant(1)
            v = self.valuation(node.base)
            if T <= k * v:
                return LaurentSeries.zero(T)
            if k > 0:
                return series_pow(self.evaluate(node.base, T - (k - 1) * v), k)
            m = -k
            base = self.evaluate(node.base, T + (m + 1) * v)
            if base.is_zero():
                raise SeriesDivisionError(f"division by a series that is zero to O(q^{base.trunc})")
            if base.trunc is None and len(base.coeffs) > 1:
                return series_inv(series_pow(base, m), T)
            return series_inv(series_pow(base, m))
        raise TypeError(f"unknown recipe node {node!r}")


def evaluate_recipe(recipe, trunc: int) -> LaurentSeries:
    """Expansion of a recipe (tree or Recipe) to exactly O(q^trunc)."""
    root = recipe.root if isinstance(recipe, Recipe) else recipe
    s = Evaluator().evaluate(root, trunc)
    return s.truncate(trunc) if s.trunc is None else s
