"""Symbol of the conformally perturbed Laplacian and its parametrix."""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

from .ncsymbol import (
    DIM,
    E_MINUS,
    E_PLUS,
    INHOMOGENEOUS,
    SymbolExpr,
    degree,
    delta_exp_h,
    delta_multi,
    factorial,
    multi_indices,
    mul,
    unit,
    xi_multi,
)


class EmptyCompositionError(ValueError):
    """The requested truncation degree lies above every possible term."""


@dataclass(frozen=True)
class GradedSymbol:
    """Finite sum of homogeneous parts keyed by xi-degree."""

    parts: dict = field(default_factory=dict)

    def __post_init__(self):
        for d, part in self.parts.items():
            if part and degree(part) != d:
                raise ValueError(f"part keyed {d} has degree {degree(part)}")

    @property
    def top_degree(self) -> int:
        return max(self.parts)

    def __getitem__(self, d) -> SymbolExpr:
        return self.parts.get(d, SymbolExpr.zero())

    def total(self) -> SymbolExpr:
        out = SymbolExpr.zero()
        for part in self.parts.values():
            out = out + part
        return out


def laplacian_symbol() -> GradedSymbol:
    a2 = SymbolExpr.monomial(1, [E_PLUS], radial=1)
    a1 = SymbolExpr.zero()
    a0 = SymbolExpr.zero()
    for i in range(1, DIM + 1):
        e = unit(i)
        d1 = delta_exp_h(e)
        a1 = a1 + SymbolExpr.monomial(1, [d1], mono=e)
        a0 = a0 + SymbolExpr.monomial(1, [delta_exp_h(tuple(2 * x for x in e))])
        a0 = a0 - SymbolExpr.monomial(1, [d1, E_MINUS, d1])
    return GradedSymbol({2: a2, 1: a1, 0: a0})


def compose(rho: GradedSymbol, rho2: GradedSymbol, min_degree: int) -> GradedSymbol:
    """``sum_l 1/l! d_xi^l(rho) delta^l(rho2)`` keeping degrees >= ``min_degree``."""
    top = rho.top_degree + rho2.top_degree
    if min_degree > top:
        raise EmptyCompositionError(f"min_degree {min_degree} exceeds top degree {top}")
    acc: dict[int, SymbolExpr] = {}
    for d1, p1 in rho.parts.items():
        for d2, p2 in rho2.parts.items():
            budget = d1 + d2 - min_degree
            for n in range(budget + 1):
                d = d1 + d2 - n
                for ell in multi_indices(n):
                    term = mul(xi_multi(p1, ell), delta_multi(p2, ell))
                    if not term:
                        continue
                    term = term.scale(Fraction(1, factorial(ell)))
                    acc[d] = acc.get(d, SymbolExpr.zero()) + term
    return GradedSymbol({d: x for d, x in acc.items() if x} or {min_degree: SymbolExpr.zero()})


@lru_cache(maxsize=None)
def _laplacian_parts():
    return laplacian_symbol().parts


@lru_cache(maxsize=None)
def _xi_derivative(j: int, ell: tuple) -> SymbolExpr:
    return xi_multi(parametrix_term(j), ell)


@lru_cache(maxsize=None)
def _delta_derivative(kdeg: int, ell: tuple) -> SymbolExpr:
    return delta_multi(_laplacian_parts()[kdeg], ell)


@lru_cache(maxsize=None)
def parametrix_term(n: int) -> SymbolExpr:
    """Homogeneous part of degree ``-2-n`` of the parametrix symbol.

    ``b_0 = e^{-h}|xi|^{-2}``; for ``n >= 1``
    ``b_n = -sum 1/l! d^l(b_j) delta^l(a_k) b_0`` over ``2+j+|l|-k = n``,
    ``0 <= j < n``, ``0 <= k <= 2``.
    """
    if n < 0:
        raise ValueError("n must be non-negative")
    b0 = SymbolExpr.monomial(1, [E_MINUS], radial=-1)
    if n == 0:
        return b0
    acc = SymbolExpr.zero()
    for j in range(n):
        for kdeg in range(3):
            m = n - 2 - j + kdeg
            if m < 0:
                continue
            for ell in multi_indices(m):
                left = _xi_derivative(j, ell)
                if not left:
                    continue
                right = _delta_derivative(kdeg, ell)
                if not right:
                    continue
                term = mul(mul(left, right), b0).scale(Fraction(-1, factorial(ell)))
                acc = acc + term
    deg = degree(acc)
    if acc and deg != -2 - n:
        raise AssertionError(f"b_{n} has degree {deg}, expected {-2 - n}")
    return acc


def parametrix(N: int) -> GradedSymbol:
    return GradedSymbol({-2 - n: parametrix_term(n) for n in range(N + 1)})


__all__ = [
    "EmptyCompositionError",
    "GradedSymbol",
    "INHOMOGENEOUS",
    "compose",
    "laplacian_symbol",
    "parametrix",
    "parametrix_term",
]
