"""Rewriting of xi-free words into modular functional-calculus normal form.

The normal form of a word is ``e^{-h} F(nabla, ..., nabla)(x_1 ... x_m)``
with each ``x_j`` a derivative of ``h``; ``nabla`` in slot ``j`` acts on the
``j``-th factor.  The rules, applied until none fires:

R1  ``e^{-h} delta^a(e^h)``  ->  ``g_1`` / ``g_2`` substitution (|a| <= 2)
R2  ``F(..)(x) e^{-h}``      ->  ``e^{-h} (e^{-(sum of variables)} F)(x)``
    unless the ``e^{-h}`` is still needed by R1 on its right
R3  ``F(x) G(y)``            ->  ``(F(s) G(t))(x y)``
R4  ``e^{h} e^{-h}``, ``e^{-h} e^{h}``  ->  ``1``

Only words with at most two derivative factors are supported; anything
else raises ``RewriteError``.
"""
from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction

from .ncsymbol import DELTA_EXP_H, E_MINUS, EXP_H, Atom, SymbolExpr, delta_h, order, unit
from .specfun import FunExpr, const, evaluate, exp, rename, taylor, to_latex
from .specfun.library import g1, g2


class RewriteError(ValueError):
    """A word lies outside the supported fragment."""


@dataclass(frozen=True)
class Applied:
    """``func(nabla, ...)`` applied to the product of ``args``."""

    func: FunExpr
    args: tuple

    @property
    def arity(self) -> int:
        return len(self.args)


@dataclass(frozen=True)
class ModTerm:
    coeff: Fraction
    pi2: int
    func: FunExpr
    args: tuple

    @property
    def arity(self) -> int:
        return len(self.args)

    def latex(self) -> str:
        nab = ",".join(["\\nabla"] * self.arity)
        arg = "".join(a.latex() for a in self.args)
        c = "" if self.coeff == 1 else f"{self.coeff}\\,"
        pi = "\\pi^{2}" if self.pi2 else ""
        return f"{c}{pi}e^{{-h}}\\Big[{to_latex(self.func)}\\Big]({nab})\\big({arg}\\big)"


class ModExpr:
    """Sum of modular terms, at most one per (pi-power, argument tuple)."""

    def __init__(self, terms=()):
        acc: dict = {}
        for term in terms:
            key = (term.pi2, term.args)
            f = term.func if term.coeff == 1 else term.coeff * term.func
            acc[key] = f if key not in acc else acc[key] + f
        self._terms = tuple(ModTerm(Fraction(1), p, f, args) for (p, args), f in sorted(acc.items(), key=_term_key))

    @property
    def terms(self) -> tuple:
        return self._terms

    def __len__(self):
        return len(self._terms)

    def __iter__(self):
        return iter(self._terms)

    def arguments(self) -> list:
        return [t.args for t in self._terms]

    def latex(self) -> str:
        return " + ".join(t.latex() for t in self._terms) or "0"

    def to_json(self) -> list:
        return [
            {
                "coeff": {"num": 1, "den": 1, "pi2": bool(t.pi2)},
                "func": to_latex(t.func),
                "args": [a.to_json() for a in t.args],
            }
            for t in self._terms
        ]

    def equivalent(self, other: "ModExpr", order: int = 8, samples: int = 40, tol: float = 1e-9) -> bool:
        """Same argument structure and functions equal (exact series + sampling)."""
        if [(t.pi2, t.args) for t in self._terms] != [(t.pi2, t.args) for t in other._terms]:
            return False
        import numpy as np

        rng = np.random.default_rng(0)
        ss, tt = rng.uniform(-3, 3, (2, samples))
        for a, b in zip(self._terms, other._terms):
            if taylor(a.func, order) != taylor(b.func, order):
                return False
            if np.max(np.abs(evaluate(a.func, ss, tt) - evaluate(b.func, ss, tt))) > tol:
                return False
        return True


def _term_key(item):
    (p, args), _ = item
    return (p, len(args), args)


# ---------------------------------------------------------------------------
# rules


def _is_delta_exp_plus(x) -> bool:
    return isinstance(x, Atom) and x.kind == DELTA_EXP_H and x.sign == 1


def _r1_products(atom: Atom):
    alpha = atom.index
    n = order(alpha)
    G1, G2 = g1(), g2()
    dirs = [k + 1 for k, e in enumerate(alpha) for _ in range(e)]
    if n == 1:
        return [(Fraction(1), [Applied(G1, (delta_h(alpha),))])]
    if n == 2:
        j, k = dirs
        dj, dk = delta_h(unit(j)), delta_h(unit(k))
        if j == k:
            return [
                (Fraction(1), [Applied(G1, (delta_h(alpha),))]),
                (Fraction(2), [Applied(G2, (dj, dj))]),
            ]
        # mixed second derivative; both orderings of the first derivatives
        return [
            (Fraction(1), [Applied(G1, (delta_h(alpha),))]),
            (Fraction(1), [Applied(G2, (dj, dk))]),
            (Fraction(1), [Applied(G2, (dk, dj))]),
        ]
    raise RewriteError(f"no substitution rule for {atom.latex()}")


def redexes(items: list) -> list:
    """All (rule, position) pairs where a rule applies."""
    out = []
    n = len(items)
    for i in range(n - 1):
        a, b = items[i], items[i + 1]
        if isinstance(a, Atom) and isinstance(b, Atom) and a.kind == EXP_H and b.kind == EXP_H and a.sign == -b.sign:
            out.append(("R4", i))
        if a == E_MINUS and _is_delta_exp_plus(b) and order(b.index) <= 2:
            out.append(("R1", i))
        if isinstance(a, Applied) and b == E_MINUS and not (i + 2 < n and _is_delta_exp_plus(items[i + 2])):
            out.append(("R2", i))
        if isinstance(a, Applied) and isinstance(b, Applied) and a.arity + b.arity <= 2:
            out.append(("R3", i))
    return out


def apply_rule(items: list, rule: str, i: int) -> list:
    """Rewrite at position ``i``; returns ``[(multiplier, new_items), ...]``."""
    head, tail = items[:i], items[i + 2 :]
    a, b = items[i], items[i + 1]
    if rule == "R4":
        return [(Fraction(1), head + tail)]
    if rule == "R1":
        return [(c, head + mid + tail) for c, mid in _r1_products(b)]
    if rule == "R2":
        shift = exp(-1) if a.arity == 1 else exp(-1, -1)
        return [(Fraction(1), head + [E_MINUS, Applied(shift * a.func, a.args)] + tail)]
    if rule == "R3":
        merged = Applied(a.func * rename(b.func, s="t"), a.args + b.args)
        return [(Fraction(1), head + [merged] + tail)]
    raise ValueError(rule)


def _finalize(coeff: Fraction, pi2: int, items: list) -> ModTerm:
    if len(items) == 2 and items[0] == E_MINUS and isinstance(items[1], Applied):
        ap = items[1]
        return ModTerm(coeff, pi2, ap.func, ap.args)
    shown = " ".join(x.latex() if isinstance(x, Atom) else f"F{x.args}" for x in items)
    raise RewriteError(f"cannot bring word to the form e^{{-h}} F(nabla)(...): {shown}")


def rewrite_word(word, coeff=Fraction(1), pi2: int = 0, rng: random.Random | None = None) -> list:
    """Normal-form terms of a single word; random redex choice when ``rng`` is given."""
    work = [(Fraction(coeff), list(word))]
    done = []
    while work:
        c, items = work.pop()
        found = redexes(items)
        if not found:
            done.append(_finalize(c, pi2, items))
            continue
        rule, i = rng.choice(found) if rng is not None else found[0]
        for m, new in apply_rule(items, rule, i):
            work.append((c * m, new))
    return done


def substitute_exponential_derivatives(x: SymbolExpr, rng: random.Random | None = None) -> ModExpr:
    """Rewrite a xi-free expression into modular normal form."""
    if not x.is_xi_free():
        raise RewriteError("expression still depends on xi; integrate over the sphere first")
    terms = []
    for c, p, _, word in x.terms:
        terms.extend(rewrite_word(word, c, p, rng))
    return ModExpr(terms)


@dataclass(frozen=True)
class CurvatureFunctions:
    k: FunExpr
    H: FunExpr
    pi2: int


def curvature_functions(m: ModExpr) -> CurvatureFunctions:
    """Extract the one- and two-variable functions from the curvature shape.

    Expects arguments ``delta_i^2(h)`` and ``delta_i(h) delta_i(h)`` for
    ``i = 1..4`` with the same function for every ``i``.
    """
    ones: dict = {}
    twos: dict = {}
    pis = set()
    for term in m:
        pis.add(term.pi2)
        args = term.args
        if len(args) == 1 and args[0].kind == 2 and order(args[0].index) == 2 and max(args[0].index) == 2:
            ones[args[0].index.index(2)] = term.func
        elif len(args) == 2 and args[0] == args[1] and order(args[0].index) == 1:
            twos[args[0].index.index(1)] = term.func
        else:
            raise RewriteError(f"unexpected argument structure {args}")
    if len(pis) > 1:
        raise RewriteError("mixed pi^2 powers")
    if set(ones) != set(range(4)) or (twos and set(twos) != set(range(4))):
        raise RewriteError("curvature shape needs all four directions")
    k = _shared(ones)
    H = _shared(twos) if twos else const(0)
    return CurvatureFunctions(k, H, pis.pop() if pis else 0)


def _shared(funcs: dict) -> FunExpr:
    first = funcs[0]
    for f in funcs.values():
        if f != first and taylor(f, 8) != taylor(first, 8):
            raise RewriteError("functions differ between directions")
    return first
