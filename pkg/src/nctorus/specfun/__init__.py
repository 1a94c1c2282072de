"""Closed-form functions with exact Taylor arithmetic and safe evaluation."""
from .checks import IdentityVerdict, check_identity
from .evaluate import PrecisionError, TaylorPoly, evalf, evaluate, taylor
from .expr import FunExpr, LinearForm, const, exp, on_line, rename, s, t, to_latex
from .library import BUILDERS, build
from .series import SingularityError

__all__ = [
    "BUILDERS",
    "FunExpr",
    "IdentityVerdict",
    "LinearForm",
    "PrecisionError",
    "SingularityError",
    "TaylorPoly",
    "build",
    "check_identity",
    "const",
    "evalf",
    "evaluate",
    "exp",
    "on_line",
    "rename",
    "s",
    "t",
    "taylor",
    "to_latex",
]
