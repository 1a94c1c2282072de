"""Exact integration of homogeneous symbols over the unit 3-sphere."""
from __future__ import annotations

import math
from fractions import Fraction
from functools import lru_cache

from .ncsymbol import ONE_XI, SymbolExpr

# A symbol with no xi-dependence; coefficients typically carry pi^2.
NCExpression = SymbolExpr


def _half_gamma_ratio(a: int) -> Fraction:
    """``Gamma((a+1)/2) / sqrt(pi)`` for even ``a``: ``(a-1)!! / 2^(a/2)``."""
    n = a // 2
    return Fraction(math.factorial(2 * n), 4**n * math.factorial(n))


@lru_cache(maxsize=None)
def moment(alpha: tuple) -> Fraction:
    """``int_{S^3} xi^alpha dOmega`` as a rational multiple of ``pi^2``.

    Zero when some exponent is odd, otherwise
    ``2 prod Gamma(b_i) / Gamma(sum b_i)`` with ``b_i = (alpha_i + 1)/2``.
    """
    alpha = tuple(alpha)
    if len(alpha) != 4 or any(a < 0 for a in alpha):
        raise ValueError(f"bad exponent {alpha}")
    if any(a % 2 for a in alpha):
        return Fraction(0)
    num = Fraction(2)
    for a in alpha:
        num *= _half_gamma_ratio(a)
    # sum of b_i = |alpha|/2 + 2, an integer
    return num / math.factorial(sum(alpha) // 2 + 1)


def integrate_on_sphere(b: SymbolExpr) -> NCExpression:
    """Restrict to ``|xi| = 1`` and integrate each monomial exactly."""
    acc: dict = {}
    for (xi, word, p), c in b.items():
        if p:
            raise ValueError("integrand already carries a pi^2 factor")
        m = moment(xi.mono)
        if m == 0:
            continue
        key = (ONE_XI, word, 1)
        acc[key] = acc.get(key, Fraction(0)) + c * m
    return SymbolExpr(acc)


def is_nc_expression(x: SymbolExpr) -> bool:
    return x.is_xi_free()
