"""Named functions of the curvature and gradient formulas.

All functions of the modular operator are written in the logarithmic
variable: ``g(Delta)`` becomes ``s -> g(e^s)``.  Two-variable functions pair
their first variable with the left tensor factor.
"""
from __future__ import annotations

from fractions import Fraction

from .expr import FunExpr, cosh_of, exp, on_line, s, sinh_of, t

HALF = Fraction(1, 2)


def g1() -> FunExpr:
    """``g_1(e^s) = (e^s - 1)/s``."""
    return (exp(1) - 1) / s


def g2() -> FunExpr:
    """``g_2(e^s, e^t)`` from the log-form quotient."""
    return (exp(1) * (exp(0, 1) - 1) * s - (exp(1) - 1) * t) / (s * t * (s + t))


def k() -> FunExpr:
    return (exp(-1) - 1) / s


def H() -> FunExpr:
    """Closed form of the two-variable curvature function."""
    num = (exp(1) - 1) * (3 * exp(0, 1) + 1) * t - (exp(1) + 3) * s * (exp(0, 1) - 1)
    return exp(-1, -1) * num / (2 * s * t * (s + t))


def H_from_g() -> FunExpr:
    """The same function assembled from ``g_1`` and ``g_2``."""
    G1 = g1()
    return -2 * exp(-1, -1) * g2() + Fraction(3, 2) * exp(-1, -1) * G1 * G1(t)


def k_tilde() -> FunExpr:
    return exp(1) * k()


def H_tilde() -> FunExpr:
    return exp(1, 1) * H()


def finite_difference_form() -> FunExpr:
    """``2 (k~(s+t) - k~(s))/t + 3/2 k~(s) k~(t)``."""
    kt = k_tilde()
    return 2 * (kt(s + t) - kt) / t + Fraction(3, 2) * kt * kt(t)


def g2_divided_difference() -> FunExpr:
    """``(g_1(uv) - g_1(u))/log v`` in logarithmic coordinates."""
    G1 = g1()
    return (G1(s + t) - G1) / t


def T() -> FunExpr:
    return (-2 * s + exp(1) - exp(-1) * (2 * s + 3) + 2) / (4 * s**2)


# -- projection dilatons (closed forms f_1..f_4) -----------


def f1() -> FunExpr:
    return (-2 * sinh_of(s) + cosh_of(s) - 1) / 4


def f2() -> FunExpr:
    return sinh_of(s / 2) ** 2 / 2


def f3() -> FunExpr:
    return (-s + sinh_of(s)) / 2 - (cosh_of(s) - 1) / 4


def f4() -> FunExpr:
    return s - sinh_of(s)


# -- gradient building blocks, parameterised by a one-variable G ------------


def E(G: FunExpr) -> FunExpr:
    return (exp(-1, -1) - 1) / (s + t) * G


def L(G: FunExpr) -> FunExpr:
    return exp(-1, -1) * ((G(-t) - G) / (s + t) + (G(t) - G(-s)) / (s + t) * exp(0, 1))


def M1(G: FunExpr) -> FunExpr:
    return (G(t) - G(s + t)) / s


def M2(G: FunExpr) -> FunExpr:
    return (G(s + t) - G) / t


def P(G: FunExpr) -> FunExpr:
    return G(s + t) * (exp(-1) - 1) / s + M1(G) * exp(-1) + M2(G)


def Gbar(G: FunExpr) -> FunExpr:
    return G(-s) * exp(-1)


def Q(G: FunExpr) -> FunExpr:
    return Gbar(G)(s + t) * (exp(-1) - 1) / s + M1(G) * exp(-1) + M2(G)


def Q_gbar(G: FunExpr) -> FunExpr:
    """``P`` applied to ``Gbar``: ``Q`` with ``M_1, M_2`` built from ``Gbar``."""
    return P(Gbar(G))


def omega1() -> FunExpr:
    G = T()
    return -G - G(-s) * exp(-1)


def omega2() -> FunExpr:
    G = T()
    return E(G) + L(G) - P(G) - Q(G)


def omega2_corrected() -> FunExpr:
    """``E + L - P - Q`` with ``Q = P(Gbar)``; this is the version the oracle confirms."""
    G = T()
    return E(G) + L(G) - P(G) - Q_gbar(G)


def omega1_closed() -> FunExpr:
    return (-2 * sinh_of(s) + sinh_of(2 * s) - cosh_of(2 * s) + 1) / (4 * s**2)


def omega2_display() -> FunExpr:
    """The long explicit display of omega_2; a cross-check target only."""
    e = exp
    sh, ch = sinh_of(s), cosh_of(s)
    a = -s * (-(s**2 + s * t + 3 * t**2) * sh + (s**2 + 5 * s * t + t**2) * ch - t**2) * e(3, 3)
    b = (
        s
        * ((s**2 * (8 * t + 5) + s * t * (12 * t + 17) + t**2 * (4 * t + 5)) * e(1) - 4 * s * t**2 - 4 * t**3 - 5 * t**2)
        * e(1, 1)
    )
    c = (
        -(5 * s**3 + s**2 * t * (4 * t + 15) + 2 * s * t**2 * (2 * t + 5) + 5 * t**3) * e(1)
        + t**2 * (-(s + t))
        - t**2 * (4 * s * (s + t - 2) - 5 * t) * e(2)
        + t * (s + t) * (2 * s + t) * e(3)
    ) * e(1, 2)
    d = s * (s * e(1) + t) * ((s + t) * e(1) - t)
    return (a + b + c + d) * e(-3, -2) / (4 * s**2 * t**2 * (s + t) ** 2)


def omega2_diagonal_display() -> FunExpr:
    """Closed form printed for ``omega_2(s, s)``."""
    inner = 8 * s + (8 * s - 5) * sinh_of(s) - 3 * sinh_of(2 * s) + sinh_of(3 * s) - 8 * cosh_of(s) - 3 * cosh_of(2 * s) + 11
    return -exp(Fraction(-3, 2)) * sinh_of(s / 2) * inner / (4 * s**3)


def omega2_antidiagonal_display() -> FunExpr:
    """Closed form printed for ``omega_2(s, -s)``."""
    return (4 * s + exp(-2) - 2 * exp(1) + 1) / (4 * s**2)


def diagonal(f: FunExpr) -> FunExpr:
    """``s -> f(s, s)``."""
    return on_line(f, 1, 1)


def antidiagonal(f: FunExpr) -> FunExpr:
    """``s -> f(s, -s)``."""
    return on_line(f, 1, -1)


BUILDERS = {
    "g1": g1,
    "g2": g2,
    "k": k,
    "H": H,
    "k_tilde": k_tilde,
    "H_tilde": H_tilde,
    "T": T,
    "f1": f1,
    "f2": f2,
    "f3": f3,
    "f4": f4,
    "omega1": omega1,
    "omega2": omega2,
    "omega1_closed": omega1_closed,
    "omega2_corrected": omega2_corrected,
    "omega2_display": omega2_display,
    "omega2_diagonal": lambda: diagonal(omega2()),
    "omega2_antidiagonal": lambda: antidiagonal(omega2()),
    "E": lambda: E(T()),
    "L": lambda: L(T()),
    "M1": lambda: M1(T()),
    "M2": lambda: M2(T()),
    "P": lambda: P(T()),
    "Q": lambda: Q(T()),
    "Q_gbar": lambda: Q_gbar(T()),
    "Gbar": lambda: Gbar(T()),
}


def build(name: str) -> FunExpr:
    try:
        return BUILDERS[name]()
    except KeyError:
        raise KeyError(f"unknown function {name!r}; known: {', '.join(sorted(BUILDERS))}") from None
