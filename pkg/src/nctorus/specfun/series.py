"""Truncated Taylor series of expression trees around a chosen centre.

The same recursion serves three purposes:

* exact bivariate Taylor coefficients at the origin (``Fraction`` backend),
* vectorised float evaluation, either directly (order 0, centre = the point)
  or as a one-dimensional expansion transversal to a singular line,
* high-precision scalar evaluation with ``mpmath``.

Denominators are factored symbolically.  A linear factor that vanishes at
the centre is divided out exactly (per homogeneous degree); all remaining
factors must be units of the series ring.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Callable

import mpmath
import numpy as np

from .expr import (
    VARIABLES,
    Add,
    Const,
    Div,
    Exp,
    FunExpr,
    LinearForm,
    Mul,
    OnLine,
    Pow,
    Var,
    as_linear,
)


class SingularityError(ArithmeticError):
    """A denominator does not divide its numerator as a power series."""


# ---------------------------------------------------------------------------
# coefficient backends


class Backend:
    name = "abstract"
    exact = False

    def const(self, q: Fraction):
        raise NotImplementedError

    def exp(self, x):
        raise NotImplementedError

    def is_zero(self, x) -> bool:
        return False


class ExactBackend(Backend):
    name = "exact"
    exact = True

    def const(self, q):
        return Fraction(q)

    def exp(self, x):
        if x != 0:
            raise ValueError("exact backend can only expand exp around 0")
        return Fraction(1)

    def is_zero(self, x):
        return x == 0


class FloatBackend(Backend):
    name = "float"

    def const(self, q):
        return float(q)

    def exp(self, x):
        return np.exp(x)


class MpBackend(Backend):
    name = "mp"

    def const(self, q):
        return mpmath.mpf(q.numerator) / q.denominator

    def exp(self, x):
        return mpmath.exp(x)


EXACT = ExactBackend()
FLOAT = FloatBackend()
MP = MpBackend()


# ---------------------------------------------------------------------------
# multi-index bookkeeping


@lru_cache(maxsize=None)
def monomials(dims: int, order: int) -> tuple:
    """Exponent tuples of total degree <= order, graded."""
    if dims == 1:
        return tuple((i,) for i in range(order + 1))
    out = []
    for d in range(order + 1):
        for i in range(d, -1, -1):
            out.append((i, d - i))
    return tuple(out)


@lru_cache(maxsize=None)
def _product_table(dims: int, order: int) -> tuple:
    mons = monomials(dims, order)
    index = {m: k for k, m in enumerate(mons)}
    table = []
    for a, ma in enumerate(mons):
        da = sum(ma)
        row = []
        for b, mb in enumerate(mons):
            if da + sum(mb) > order:
                continue
            row.append((b, index[tuple(x + y for x, y in zip(ma, mb))]))
        table.append(tuple(row))
    return tuple(table)


class Series:
    """Coefficients of a truncated series, indexed like ``monomials(dims, order)``."""

    __slots__ = ("dims", "order", "c", "backend")

    def __init__(self, dims, order, coeffs, backend):
        self.dims = dims
        self.order = order
        self.c = coeffs
        self.backend = backend

    # constructors
    @classmethod
    def constant(cls, value, dims, order, backend):
        zero = backend.const(Fraction(0))
        c = [zero] * len(monomials(dims, order))
        c[0] = value
        return cls(dims, order, c, backend)

    def truncate(self, order: int) -> "Series":
        if order == self.order:
            return self
        if order > self.order:
            raise ValueError("cannot extend a truncated series")
        n = len(monomials(self.dims, order))
        return Series(self.dims, order, self.c[:n], self.backend)

    # arithmetic
    def __add__(self, other: "Series") -> "Series":
        order = min(self.order, other.order)
        n = len(monomials(self.dims, order))
        return Series(self.dims, order, [a + b for a, b in zip(self.c[:n], other.c[:n])], self.backend)

    def scale(self, x) -> "Series":
        return Series(self.dims, self.order, [x * a for a in self.c], self.backend)

    def __mul__(self, other: "Series") -> "Series":
        order = min(self.order, other.order)
        table = _product_table(self.dims, order)
        zero = self.backend.const(Fraction(0))
        out = [zero] * len(table)
        exact = self.backend.exact
        a_c, b_c = self.c, other.c
        for a, row in enumerate(table):
            ca = a_c[a]
            if exact and ca == 0:
                continue
            for b, k in row:
                cb = b_c[b]
                if exact and cb == 0:
                    continue
                out[k] = out[k] + ca * cb
        return Series(self.dims, order, out, self.backend)

    def inverse(self) -> "Series":
        c0 = self.c[0]
        if self.backend.exact and c0 == 0:
            raise SingularityError("series with zero constant term is not invertible")
        mons = monomials(self.dims, self.order)
        index = {m: k for k, m in enumerate(mons)}
        inv0 = 1 / c0
        zero = self.backend.const(Fraction(0))
        g = [zero] * len(mons)
        g[0] = inv0
        exact = self.backend.exact
        for k in range(1, len(mons)):
            mk = mons[k]
            acc = zero
            # sum over beta <= mk, beta != 0 of f_beta * g_{mk - beta}
            for j in range(1, k + 1):
                mb = mons[j]
                if any(x > y for x, y in zip(mb, mk)):
                    continue
                fb = self.c[j]
                if exact and fb == 0:
                    continue
                rest = tuple(y - x for x, y in zip(mb, mk))
                acc = acc + fb * g[index[rest]]
            g[k] = -acc * inv0
        return Series(self.dims, self.order, g, self.backend)

    def divide_linear(self, coeffs: tuple) -> "Series":
        """Exact quotient by the homogeneous linear polynomial ``sum coeffs[j] u_j``.

        The result has order reduced by one.
        """
        be = self.backend
        order = self.order - 1
        if order < 0:
            raise ValueError("series order too low to divide")
        mons_in = monomials(self.dims, self.order)
        idx_in = {m: k for k, m in enumerate(mons_in)}
        mons_out = monomials(self.dims, order)
        zero = be.const(Fraction(0))
        out = [zero] * len(mons_out)
        if self.dims == 1:
            (b,) = coeffs
            if b == 0:
                raise SingularityError("division by the zero form")
            if be.exact and self.c[0] != 0:
                raise SingularityError("numerator does not vanish on the singular line")
            inv = be.const(1 / Fraction(b))
            for i in range(order + 1):
                out[i] = self.c[i + 1] * inv
            return Series(1, order, out, be)
        a, b = (Fraction(x) for x in coeffs)
        if be.exact and self.c[0] != 0:
            raise SingularityError("numerator does not vanish at the origin")
        idx_out = {m: k for k, m in enumerate(mons_out)}
        # N_d = (a u1 + b u2) Q_{d-1}; coefficient of u1^i u2^(d-i) is
        # a q[i-1, d-i] + b q[i, d-1-i].
        for d in range(1, self.order + 1):
            n = [self.c[idx_in[(i, d - i)]] for i in range(d + 1)]
            q = [zero] * d  # q[i] = coefficient of u1^i u2^(d-1-i)
            if b != 0:
                inv_b = be.const(1 / b)
                ca = be.const(a)
                for i in range(d):
                    prev = q[i - 1] if i > 0 else zero
                    q[i] = (n[i] - ca * prev) * inv_b
                if be.exact and a * q[d - 1] != n[d]:
                    raise SingularityError("numerator not divisible by the linear factor")
            else:
                inv_a = be.const(1 / a)
                if be.exact and n[0] != 0:
                    raise SingularityError("numerator not divisible by the linear factor")
                for i in range(1, d + 1):
                    q[i - 1] = n[i] * inv_a
            for i in range(d):
                out[idx_out[(i, d - 1 - i)]] = q[i]
        return Series(2, order, out, be)

    def evaluate(self, u: tuple):
        """Sum the series at local coordinates ``u`` (Horner along the grading)."""
        mons = monomials(self.dims, self.order)
        total = None
        for m, c in zip(mons, self.c):
            term = c
            for x, e in zip(u, m):
                if e:
                    term = term * x**e
            total = term if total is None else total + term
        return total

    def top_degree_magnitude(self, u: tuple):
        """Size of the highest-degree block at ``u``; a truncation-error proxy."""
        mons = monomials(self.dims, self.order)
        total = 0
        for m, c in zip(mons, self.c):
            if sum(m) != self.order:
                continue
            term = c
            for x, e in zip(u, m):
                if e:
                    term = term * x**e
            total = total + abs(term)
        return total


# ---------------------------------------------------------------------------
# expansion frames


@dataclass
class Frame:
    """Where and how to expand.

    ``center`` maps each variable to its value at the centre (backend values,
    possibly arrays); ``jac[v][j]`` is the rational coefficient of local
    coordinate ``u_j`` in variable ``v``; ``vanishing(form)`` says whether a
    linear form is identically zero at the centre.
    """

    backend: Backend
    dims: int
    center: dict
    jac: dict
    vanishing: Callable[[LinearForm], bool]
    online: Callable | None = None
    memo: dict = field(default_factory=dict)

    def local_form(self, form: LinearForm) -> tuple:
        return tuple(
            sum((form.coeff(v) * self.jac[v][j] for v in VARIABLES), Fraction(0))
            for j in range(self.dims)
        )

    def value_at_center(self, form: LinearForm):
        be = self.backend
        total = be.const(Fraction(0))
        for v in VARIABLES:
            c = form.coeff(v)
            if c != 0:
                total = total + be.const(c) * self.center[v]
        return total


def origin_frame(dims: int, backend: Backend = EXACT, online=None) -> Frame:
    zero = backend.const(Fraction(0))
    if dims == 1:
        jac = {"s": (Fraction(1),), "t": (Fraction(0),)}
    else:
        jac = {"s": (Fraction(1), Fraction(0)), "t": (Fraction(0), Fraction(1))}
    return Frame(backend, dims, {"s": zero, "t": zero}, jac, lambda form: True, online)


def expand(f: FunExpr, order: int, frame: Frame) -> Series:
    key = (id(f), order)
    hit = frame.memo.get(key)
    if hit is not None and hit[0] is f:
        return hit[1]
    out = _expand(f, order, frame)
    frame.memo[key] = (f, out)
    return out


def _linear_series(form: LinearForm, order: int, frame: Frame) -> Series:
    be = frame.backend
    zero = be.const(Fraction(0))
    mons = monomials(frame.dims, order)
    c = [zero] * len(mons)
    c[0] = frame.value_at_center(form)
    if order >= 1:
        for j, a in enumerate(frame.local_form(form)):
            if a != 0:
                unit = tuple(1 if k == j else 0 for k in range(frame.dims))
                c[mons.index(unit)] = be.const(a)
    return Series(frame.dims, order, c, be)


def _expand(f: FunExpr, order: int, frame: Frame) -> Series:
    be = frame.backend
    dims = frame.dims
    if isinstance(f, Const):
        return Series.constant(be.const(f.value), dims, order, be)
    if isinstance(f, Var):
        form = LinearForm.of(1, 0) if f.name == "s" else LinearForm.of(0, 1)
        return _linear_series(form, order, frame)
    if isinstance(f, Exp):
        base = be.exp(frame.value_at_center(f.form))
        lin = _linear_series(f.form, order, frame)
        lin.c[0] = be.const(Fraction(0))
        acc = Series.constant(be.const(Fraction(1)), dims, order, be)
        power = acc
        for n in range(1, order + 1):
            power = power * lin
            acc = acc + power.scale(be.const(Fraction(1, math.factorial(n))))
        return acc.scale(base)
    if isinstance(f, Add):
        out = expand(f.terms[0], order, frame)
        for x in f.terms[1:]:
            out = out + expand(x, order, frame)
        return out
    if isinstance(f, Mul):
        out = None
        scalar = Fraction(1)
        for x in f.factors:
            if isinstance(x, Const):
                scalar *= x.value
                continue
            sx = expand(x, order, frame)
            out = sx if out is None else out * sx
        if out is None:
            return Series.constant(be.const(scalar), dims, order, be)
        return out.scale(be.const(scalar)) if scalar != 1 else out
    if isinstance(f, Pow):
        base = expand(f.base, order, frame)
        out = base
        for _ in range(f.exponent - 1):
            out = out * base
        return out
    if isinstance(f, Div):
        return _expand_div(f, order, frame)
    if isinstance(f, OnLine):
        if frame.online is None:
            raise NotImplementedError("restriction to a line is not expandable in this frame")
        return frame.online(f, order, frame)
    raise TypeError(f"unknown node {type(f).__name__}")


def _denominator_factors(den: FunExpr):
    """Split a denominator into (constant, linear forms, other factors)."""
    c = Fraction(1)
    linear: list[LinearForm] = []
    other: list[FunExpr] = []
    stack = [den]
    while stack:
        x = stack.pop()
        if isinstance(x, Const):
            c *= x.value
            continue
        if isinstance(x, Mul):
            stack.extend(x.factors)
            continue
        if isinstance(x, Pow):
            stack.extend([x.base] * x.exponent)
            continue
        lin = as_linear(x)
        if lin is not None and not lin.is_zero():
            linear.append(lin)
        elif lin is not None:
            raise SingularityError("denominator is identically zero")
        else:
            other.append(x)
    return c, linear, other


def _expand_div(f: Div, order: int, frame: Frame) -> Series:
    be = frame.backend
    c, linear, other = _denominator_factors(f.den)
    singular = [lf for lf in linear if frame.vanishing(lf)]
    regular = [lf for lf in linear if not frame.vanishing(lf)]
    k = len(singular)
    num = expand(f.num, order + k, frame)
    for lf in singular:
        num = num.divide_linear(frame.local_form(lf))
    unit = None
    for lf in regular:
        sx = _linear_series(lf, order, frame)
        unit = sx if unit is None else unit * sx
    for x in other:
        sx = expand(x, order, frame)
        unit = sx if unit is None else unit * sx
    out = num if unit is None else num * unit.inverse()
    return out.scale(be.const(1 / c)) if c != 1 else out
