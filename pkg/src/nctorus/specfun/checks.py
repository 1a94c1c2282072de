"""Randomised plus exact-series comparison of two functions."""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .evaluate import evaluate, taylor
from .expr import FunExpr
from .series import SingularityError


@dataclass
class IdentityVerdict:
    passed: bool
    max_deviation: float
    worst_point: tuple
    series_equal: bool | None  # None when either side is not series-admissible
    failures: list = field(default_factory=list)

    def __bool__(self):
        return self.passed


def check_identity(
    lhs: FunExpr,
    rhs: FunExpr,
    box=((-3.0, 3.0), (-3.0, 3.0)),
    samples: int = 200,
    tol: float = 1e-10,
    seed: int = 0,
    series_order: int = 10,
    relative: bool = False,
) -> IdentityVerdict:
    """Compare ``lhs`` and ``rhs`` at seeded random points in ``box``.

    The verdict also records whether the Taylor series at the origin agree
    exactly up to ``series_order``; a series mismatch fails the check.
    """
    rng = np.random.default_rng(seed)
    (s0, s1), (t0, t1) = box
    ss = rng.uniform(s0, s1, samples)
    tt = rng.uniform(t0, t1, samples)
    a = evaluate(lhs, ss, tt)
    b = evaluate(rhs, ss, tt)
    dev = np.abs(a - b)
    if relative:
        dev = dev / np.maximum(1.0, np.abs(b))
    worst = int(np.argmax(dev))
    bad = np.nonzero(dev > tol)[0]
    failures = [(float(ss[i]), float(tt[i]), float(dev[i])) for i in bad[:20]]
    try:
        series_equal = taylor(lhs, series_order) == taylor(rhs, series_order)
    except SingularityError:
        series_equal = None
    passed = len(bad) == 0 and series_equal is not False
    return IdentityVerdict(passed, float(dev[worst]), (float(ss[worst]), float(tt[worst])), series_equal, failures)
