"""Closed-form expression trees in the variables ``s`` and ``t``.

Expressions are immutable and hashable.  Constants are exact rationals and
the only transcendental node is ``exp`` of a homogeneous linear form with
rational coefficients, which keeps Taylor arithmetic at the origin exact.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from numbers import Rational

VARIABLES = ("s", "t")


def _frac(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, (int, Rational)):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x)
    raise TypeError(f"exact rational expected, got {type(x).__name__}")


class FunExpr:
    """Base class for expression nodes."""

    __slots__ = ()

    # -- construction helpers -------------------------------------------------
    def __add__(self, other):
        return add(self, wrap(other))

    def __radd__(self, other):
        return add(wrap(other), self)

    def __sub__(self, other):
        return add(self, neg(wrap(other)))

    def __rsub__(self, other):
        return add(wrap(other), neg(self))

    def __mul__(self, other):
        return mul(self, wrap(other))

    def __rmul__(self, other):
        return mul(wrap(other), self)

    def __truediv__(self, other):
        return div(self, wrap(other))

    def __rtruediv__(self, other):
        return div(wrap(other), self)

    def __neg__(self):
        return neg(self)

    def __pos__(self):
        return self

    def __pow__(self, n: int):
        return power(self, n)

    def __call__(self, s, t=None):
        """Substitute linear forms (or numbers) for the variables.

        ``G(s + t)`` for a one-variable ``G`` means ``G`` with ``s`` replaced
        by ``s + t``.  Numeric arguments evaluate numerically.
        """
        if not isinstance(s, FunExpr) and (t is None or not isinstance(t, FunExpr)):
            from .evaluate import evaluate

            return evaluate(self, s, 0.0 if t is None else t)
        mapping = {"s": wrap(s)}
        if t is not None:
            mapping["t"] = wrap(t)
        return self.subs(mapping)

    # -- structure ------------------------------------------------------------
    @property
    def variables(self) -> frozenset:
        raise NotImplementedError

    @property
    def nvars(self) -> int:
        """1 for functions of ``s`` alone, 2 if ``t`` occurs, 0 for constants."""
        v = self.variables
        if "t" in v:
            return 2
        return 1 if v else 0

    def subs(self, mapping: dict) -> "FunExpr":
        raise NotImplementedError

    def size(self) -> int:
        raise NotImplementedError


@dataclass(frozen=True, eq=True)
class Const(FunExpr):
    value: Fraction

    @property
    def variables(self):
        return frozenset()

    def subs(self, mapping):
        return self

    def size(self):
        return 1

    def __repr__(self):
        return f"Const({self.value})"


@dataclass(frozen=True, eq=True)
class Var(FunExpr):
    name: str

    def __post_init__(self):
        if self.name not in VARIABLES:
            raise ValueError(f"unknown variable {self.name!r}")

    @property
    def variables(self):
        return frozenset([self.name])

    def subs(self, mapping):
        return mapping.get(self.name, self)

    def size(self):
        return 1

    def __repr__(self):
        return self.name


@dataclass(frozen=True, eq=True)
class LinearForm:
    """Homogeneous linear form ``a*s + b*t`` with rational ``a, b``."""

    s: Fraction = Fraction(0)
    t: Fraction = Fraction(0)

    @classmethod
    def of(cls, a=0, b=0) -> "LinearForm":
        return cls(_frac(a), _frac(b))

    def coeff(self, name: str) -> Fraction:
        return self.s if name == "s" else self.t

    def is_zero(self) -> bool:
        return self.s == 0 and self.t == 0

    def __add__(self, other: "LinearForm") -> "LinearForm":
        return LinearForm(self.s + other.s, self.t + other.t)

    def scale(self, c) -> "LinearForm":
        c = _frac(c)
        return LinearForm(self.s * c, self.t * c)

    def proportional_to(self, other: "LinearForm") -> bool:
        return self.s * other.t == self.t * other.s and not self.is_zero()

    def variables(self):
        return frozenset(n for n in VARIABLES if self.coeff(n) != 0)

    def __str__(self):
        parts = []
        for name in VARIABLES:
            c = self.coeff(name)
            if c == 0:
                continue
            if c == 1:
                parts.append(f"+{name}")
            elif c == -1:
                parts.append(f"-{name}")
            else:
                parts.append(f"{'+' if c > 0 else '-'}{abs(c)}*{name}")
        text = "".join(parts) or "0"
        return text[1:] if text.startswith("+") else text


@dataclass(frozen=True, eq=True)
class Exp(FunExpr):
    form: LinearForm

    @property
    def variables(self):
        return self.form.variables()

    def subs(self, mapping):
        total = LinearForm()
        for name in VARIABLES:
            c = self.form.coeff(name)
            if c == 0:
                continue
            repl = mapping.get(name, Var(name))
            lin = as_linear(repl)
            if lin is None:
                raise ValueError(f"exp argument must stay linear; cannot substitute {repl!r}")
            total = total + lin.scale(c)
        return Exp(total) if not total.is_zero() else ONE

    def size(self):
        return 1

    def __repr__(self):
        return f"exp({self.form})"


@dataclass(frozen=True, eq=True)
class Add(FunExpr):
    terms: tuple

    @cached_property
    def variables(self):
        return frozenset().union(*(x.variables for x in self.terms))

    def subs(self, mapping):
        return add(*(x.subs(mapping) for x in self.terms))

    def size(self):
        return 1 + sum(x.size() for x in self.terms)

    def __repr__(self):
        return "(" + " + ".join(map(repr, self.terms)) + ")"


@dataclass(frozen=True, eq=True)
class Mul(FunExpr):
    factors: tuple

    @cached_property
    def variables(self):
        return frozenset().union(*(x.variables for x in self.factors))

    def subs(self, mapping):
        return mul(*(x.subs(mapping) for x in self.factors))

    def size(self):
        return 1 + sum(x.size() for x in self.factors)

    def __repr__(self):
        return "*".join(map(repr, self.factors))


@dataclass(frozen=True, eq=True)
class Div(FunExpr):
    num: FunExpr
    den: FunExpr

    @cached_property
    def variables(self):
        return self.num.variables | self.den.variables

    def subs(self, mapping):
        return div(self.num.subs(mapping), self.den.subs(mapping))

    def size(self):
        return 1 + self.num.size() + self.den.size()

    def __repr__(self):
        return f"({self.num!r})/({self.den!r})"


@dataclass(frozen=True, eq=True)
class Pow(FunExpr):
    base: FunExpr
    exponent: int

    @property
    def variables(self):
        return self.base.variables

    def subs(self, mapping):
        return power(self.base.subs(mapping), self.exponent)

    def size(self):
        return 1 + self.base.size()

    def __repr__(self):
        return f"({self.base!r})**{self.exponent}"


@dataclass(frozen=True, eq=True)
class OnLine(FunExpr):
    """``s -> f(a*s, b*s)``: restriction of a two-variable function to a line.

    Lines through the origin may lie inside the singular set of ``f``
    (for instance ``t = -s``); the restriction then means the continuous
    extension, which the series machinery computes as a limit.
    """

    inner: FunExpr
    a: Fraction
    b: Fraction

    @property
    def variables(self):
        return frozenset(["s"])

    def subs(self, mapping):
        repl = mapping.get("s", Var("s"))
        lin = as_linear(repl)
        if lin is None or lin.t != 0:
            raise ValueError("OnLine only supports rescaling s")
        return OnLine(self.inner, self.a * lin.s, self.b * lin.s)

    def size(self):
        return 1 + self.inner.size()

    def __repr__(self):
        return f"OnLine({self.inner!r}; {self.a}, {self.b})"


ZERO = Const(Fraction(0))
ONE = Const(Fraction(1))


def wrap(x) -> FunExpr:
    if isinstance(x, FunExpr):
        return x
    return Const(_frac(x))


def const(x) -> Const:
    return Const(_frac(x))


def add(*terms) -> FunExpr:
    flat = []
    c = Fraction(0)
    for x in terms:
        x = wrap(x)
        if isinstance(x, Add):
            for y in x.terms:
                if isinstance(y, Const):
                    c += y.value
                else:
                    flat.append(y)
        elif isinstance(x, Const):
            c += x.value
        else:
            flat.append(x)
    if c != 0:
        flat.append(Const(c))
    if not flat:
        return ZERO
    if len(flat) == 1:
        return flat[0]
    return Add(tuple(flat))


def mul(*factors) -> FunExpr:
    flat = []
    c = Fraction(1)
    for x in factors:
        x = wrap(x)
        if isinstance(x, Mul):
            for y in x.factors:
                if isinstance(y, Const):
                    c *= y.value
                else:
                    flat.append(y)
        elif isinstance(x, Const):
            c *= x.value
        else:
            flat.append(x)
    if c == 0:
        return ZERO
    if not flat:
        return Const(c)
    if c != 1:
        flat.insert(0, Const(c))
    if len(flat) == 1:
        return flat[0]
    return Mul(tuple(flat))


def neg(x: FunExpr) -> FunExpr:
    return mul(Const(Fraction(-1)), x)


def div(num: FunExpr, den: FunExpr) -> FunExpr:
    num, den = wrap(num), wrap(den)
    if isinstance(den, Const):
        if den.value == 0:
            raise ZeroDivisionError("division by the constant 0")
        return mul(Const(1 / den.value), num)
    if num == ZERO:
        return ZERO
    return Div(num, den)


def power(base: FunExpr, n: int) -> FunExpr:
    if not isinstance(n, int) or n < 0:
        raise ValueError("only non-negative integer powers are supported; use division")
    base = wrap(base)
    if n == 0:
        return ONE
    if n == 1:
        return base
    if isinstance(base, Const):
        return Const(base.value**n)
    return Pow(base, n)


def as_linear(x: FunExpr) -> LinearForm | None:
    """The homogeneous linear form equal to ``x``, or None."""
    if isinstance(x, Var):
        return LinearForm.of(1, 0) if x.name == "s" else LinearForm.of(0, 1)
    if isinstance(x, Const):
        return LinearForm() if x.value == 0 else None
    if isinstance(x, Add):
        total = LinearForm()
        for y in x.terms:
            lin = as_linear(y)
            if lin is None:
                return None
            total = total + lin
        return total
    if isinstance(x, Mul):
        c = Fraction(1)
        lin = None
        for y in x.factors:
            if isinstance(y, Const):
                c *= y.value
            elif lin is None:
                lin = as_linear(y)
                if lin is None:
                    return None
            else:
                return None
        return lin.scale(c) if lin is not None else None
    return None


s = Var("s")
t = Var("t")


def exp(a=0, b=0) -> FunExpr:
    """``exp(a*s + b*t)``."""
    form = LinearForm.of(a, b)
    return ONE if form.is_zero() else Exp(form)


def exp_of(x: FunExpr) -> FunExpr:
    lin = as_linear(wrap(x))
    if lin is None:
        raise ValueError("exp argument must be a homogeneous linear form")
    return ONE if lin.is_zero() else Exp(lin)


def sinh_of(x: FunExpr) -> FunExpr:
    return (exp_of(x) - exp_of(-x)) / 2


def cosh_of(x: FunExpr) -> FunExpr:
    return (exp_of(x) + exp_of(-x)) / 2


def on_line(f: FunExpr, a, b) -> FunExpr:
    return OnLine(f, _frac(a), _frac(b))


def rename(f: FunExpr, **mapping: str) -> FunExpr:
    """Rename variables, e.g. ``rename(g, s="t")`` turns ``g(s)`` into ``g(t)``."""
    return f.subs({k: Var(v) for k, v in mapping.items()})


def to_latex(f: FunExpr) -> str:
    """Plain LaTeX rendering; no simplification is attempted."""
    if isinstance(f, Const):
        v = f.value
        if v.denominator == 1:
            return str(v.numerator)
        sign = "-" if v < 0 else ""
        return f"{sign}\\frac{{{abs(v.numerator)}}}{{{v.denominator}}}"
    if isinstance(f, Var):
        return f.name
    if isinstance(f, Exp):
        return f"e^{{{f.form}}}"
    if isinstance(f, Add):
        out = to_latex(f.terms[0])
        for x in f.terms[1:]:
            piece = to_latex(x)
            out += piece if piece.startswith("-") else "+" + piece
        return out
    if isinstance(f, Mul):
        parts = []
        for x in f.factors:
            piece = to_latex(x)
            if isinstance(x, Add):
                piece = f"\\left({piece}\\right)"
            parts.append(piece)
        if parts[0] == "-1" and len(parts) > 1:
            return "-" + " ".join(parts[1:])
        return " ".join(parts)
    if isinstance(f, Div):
        return f"\\frac{{{to_latex(f.num)}}}{{{to_latex(f.den)}}}"
    if isinstance(f, Pow):
        return f"\\left({to_latex(f.base)}\\right)^{{{f.exponent}}}"
    if isinstance(f, OnLine):
        return f"\\left.{to_latex(f.inner)}\\right|_{{(s,t)=({f.a}s,{f.b}s)}}"
    raise TypeError(type(f))
