"""Independent reference computations used as test oracles.

Nothing here imports the package: these are deliberately naive versions
(plain Python integers, brute-force enumeration, sympy) of things the
package computes in a smarter way.
"""

from __future__ import annotations

from functools import lru_cache

import sympy


def partitions(n, largest=None):
    """Yield the partitions of n as non-increasing tuples."""
    if largest is None:
        largest = n
    if n == 0:
        yield ()
        return
    for first in range(min(n, largest), 0, -1):
        for rest in partitions(n - first, first):
            yield (first,) + rest


@lru_cache(maxsize=None)
def partition_count(n):
    return sum(1 for _ in partitions(n))


def naive_mul(a, b, count):
    out = [0] * count
    for i, x in enumerate(a[:count]):
        if x:
            for j, y in enumerate(b[: count - i]):
                out[i + j] += x * y
    return out


def naive_euler(delta, e, count):
    """prod_{n>=1} (1 - q^(delta n))^e, first ``count`` coefficients, by repeated
    multiplication (e >= 0) or geometric series (e < 0)."""
    out = [1] + [0] * (count - 1)
    for n in range(1, count):
        k = delta * n
        if k >= count:
            break
        if e >= 0:
            factor = [1] + [0] * (count - 1)
            factor[k] = -1
            for _ in range(e):
                out = naive_mul(out, factor, count)
        else:
            geo = [0] * count
            for m in range(0, count, k):
                geo[m] = 1
            for _ in range(-e):
                out = naive_mul(out, geo, count)
    return out


def sigma(k, n):
    return sum(d**k for d in range(1, n + 1) if n % d == 0)


def t_coefficients(count):
    """q^5 * t = prod (1-q^n)^12 (1-q^11n)^-12 as plain integers."""
    return naive_mul(naive_euler(1, 12, count), naive_euler(11, -12, count), count)


def sympy_poly(p, var):
    """Package Poly -> sympy expression in ``var``."""
    return sum(sympy.Rational(int(c.numerator), int(c.denominator)) * var**k for k, c in enumerate(p.coeffs))


def sympy_relation(p):
    x, y = sympy.symbols("x y")
    return sum(c * x**i * y**j for (i, j), c in p.coeffs.items()), x, y
