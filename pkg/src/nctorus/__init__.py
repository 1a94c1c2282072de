"""Scalar curvature and action gradient of the conformally perturbed noncommutative 4-torus.

Symbolic pipeline: ``ncsymbol`` -> ``parametrix`` -> ``sphere`` -> ``modcalc``,
with closed-form functions in ``specfun``, numerical checks in ``oracle`` and
the end-to-end derivations in ``geometry``.
"""
from .geometry import derive_curvature, derive_gradient, derive_projection_curvature
from .modcalc import ModExpr, RewriteError, curvature_functions, substitute_exponential_derivatives
from .ncsymbol import Atom, SymbolExpr
from .parametrix import compose, laplacian_symbol, parametrix, parametrix_term
from .sphere import integrate_on_sphere, moment

__all__ = [
    "Atom",
    "ModExpr",
    "RewriteError",
    "SymbolExpr",
    "compose",
    "curvature_functions",
    "derive_curvature",
    "derive_gradient",
    "derive_projection_curvature",
    "integrate_on_sphere",
    "laplacian_symbol",
    "moment",
    "parametrix",
    "parametrix_term",
    "substitute_exponential_derivatives",
]
