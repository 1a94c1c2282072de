"""End-to-end pipelines: curvature, projection dilatons, action gradient."""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

from .modcalc import CurvatureFunctions, ModExpr, ModTerm, curvature_functions, substitute_exponential_derivatives
from .ncsymbol import DIM, E_MINUS, SymbolExpr, delta_exp_h, delta_h, unit
from .parametrix import parametrix_term
from .specfun import FunExpr, const, on_line, s, taylor
from .specfun.library import f1, f2, f3, f4, omega1, omega2, omega2_corrected
from .sphere import NCExpression, integrate_on_sphere

CONSTANT_NOTE = {
    "symbol": "c",
    "inverse": "2*pi^2",
    "meaning": "the residue is the sphere integral up to the factor 1/c = 2 pi^2; outputs omit c",
}


def reference_curvature_raw() -> NCExpression:
    """``pi^2 sum_i (-e^{-h} d_i^2(e^h) e^{-h} + 3/2 e^{-h} d_i(e^h) e^{-h} d_i(e^h) e^{-h})``."""
    out = SymbolExpr.zero()
    for i in range(1, DIM + 1):
        e = unit(i)
        d1, d2 = delta_exp_h(e), delta_exp_h(tuple(2 * x for x in e))
        out = out + SymbolExpr.monomial(-1, [E_MINUS, d2, E_MINUS], pi2=1)
        out = out + SymbolExpr.monomial(Fraction(3, 2), [E_MINUS, d1, E_MINUS, d1, E_MINUS], pi2=1)
    return out


@dataclass(frozen=True)
class CurvatureResult:
    raw: NCExpression
    modular: ModExpr
    k: FunExpr
    H: FunExpr
    pi2: int
    constant_note: dict = field(default_factory=lambda: dict(CONSTANT_NOTE))


@lru_cache(maxsize=None)
def derive_curvature() -> CurvatureResult:
    raw = integrate_on_sphere(parametrix_term(2))
    if raw != reference_curvature_raw():
        raise AssertionError("sphere-integrated b_2 differs from the reference expression")
    modular = substitute_exponential_derivatives(raw)
    cf: CurvatureFunctions = curvature_functions(modular)
    return CurvatureResult(raw, modular, cf.k, cf.H, cf.pi2)


# ---------------------------------------------------------------------------
# projection dilatons h = s p

BASIS = ("X", "Xp", "pX", "pXp")  # X = sum_i delta_i^2(p)


@dataclass(frozen=True)
class ProjectionCurvature:
    """Coefficients of ``e^{-sp}(c_1 X + c_2 Xp + c_3 pX + c_4 pXp)``.

    ``f`` holds the coefficients in the scale of the general curvature
    formula (``pi^2`` and ``c`` omitted).  ``normalization`` is the factor
    relating them to the printed ``f_1, f_2``; ``matches`` records, per
    slot, whether ``f[i] == normalization * printed f_i`` as exact series.
    """

    f: tuple
    normalization: Fraction
    matches: tuple
    note: str

    def statement_scale(self) -> tuple:
        return tuple(fi / self.normalization for fi in self.f)


def projection_coefficients(k: FunExpr, H: FunExpr) -> tuple:
    """Specialise ``k(nabla)`` and ``H(nabla, nabla)`` to ``h = s p``.

    ``nabla = -s ad_p`` has eigenvalue ``0`` on ``pXp`` and ``(1-p)X(1-p)``,
    ``-s`` on ``pX(1-p)`` and ``s`` on ``(1-p)Xp``.  With
    ``delta(p) = p delta(p)(1-p) + (1-p) delta(p) p`` the quadratic term is
    ``H(-s, s) p Y p + H(s, -s)(1-p) Y (1-p)`` for ``Y = sum_i delta_i(p)^2``,
    and ``2Y = X - Xp - pX`` rewrites it in the basis.
    """
    k0 = const(taylor(k, 0)[0])
    k_plus, k_minus = k, k(-s)
    h_pm = on_line(H, 1, -1)  # H(s, -s)
    h_mp = on_line(H, -1, 1)  # H(-s, s)
    c_x = s * k0 + s**2 * h_pm / 2
    c_xp = -s * k0 + s * k_plus - s**2 * h_pm / 2
    c_px = -s * k0 + s * k_minus - s**2 * h_pm / 2
    c_pxp = 2 * s * k0 - s * k_minus - s * k_plus + s**2 * (h_pm - h_mp) / 2
    return (c_x, c_xp, c_px, c_pxp)


@lru_cache(maxsize=None)
def derive_projection_curvature(order: int = 12) -> ProjectionCurvature:
    cur = derive_curvature()
    coeffs = projection_coefficients(cur.k, cur.H)
    printed = (f1(), f2(), f3(), f4())
    ratio = taylor(coeffs[1], 2)[2] / taylor(printed[1], 2)[2]
    matches = tuple(taylor(c, order) == taylor(ratio * p, order) for c, p in zip(coeffs, printed))
    bad = [f"f{i + 1}" for i, ok in enumerate(matches) if not ok]
    note = (
        f"derived coefficients equal {ratio} x the printed f1..f4 in slots "
        + ", ".join(f"f{i + 1}" for i, ok in enumerate(matches) if ok)
        + ("; printed " + ", ".join(bad) + " disagree with the derivation" if bad else "")
    )
    return ProjectionCurvature(coeffs, ratio, matches, note)


# ---------------------------------------------------------------------------
# gradient of the action


@dataclass(frozen=True)
class GradientResult:
    omega1: FunExpr
    omega2: FunExpr
    omega2_corrected: FunExpr
    modular_form: ModExpr
    note: str


def _gradient_modexpr(w1: FunExpr, w2: FunExpr) -> ModExpr:
    terms = []
    for i in range(1, DIM + 1):
        e = unit(i)
        terms.append(ModTerm(Fraction(1), 0, w1, (delta_h(tuple(2 * x for x in e)),)))
        terms.append(ModTerm(Fraction(1), 0, w2, (delta_h(e), delta_h(e))))
    return ModExpr(terms)


@lru_cache(maxsize=None)
def derive_gradient(variant: str = "stated") -> GradientResult:
    if variant not in ("stated", "corrected"):
        raise ValueError(f"unknown omega2 variant {variant!r}")
    w1, w2, w2c = omega1(), omega2(), omega2_corrected()
    chosen = {"stated": w2, "corrected": w2c}[variant]
    note = (
        "omega2 = E + L - P - Q with M1, M2 inside Q built from T; "
        "omega2_corrected uses Q = P(Gbar), the form that finite differences of the action confirm"
    )
    return GradientResult(w1, w2, w2c, _gradient_modexpr(w1, chosen), note)
