"""Taylor coefficients and numerical evaluation of ``FunExpr`` trees.

Every function used in this package has removable singularities on the
lines ``s = 0``, ``t = 0`` and ``s + t = 0``.  Evaluation therefore splits
the sample points into groups:

* near the origin: the exact Taylor polynomial at ``(0, 0)``;
* near exactly one singular line: a one-dimensional expansion in the
  transversal coordinate, centred on the line (order 0 suffices when the
  point lies on the line);
* elsewhere: direct evaluation.

The float path favours speed (the matrix oracle evaluates thousands of
points per model) and uses a wider switch-over band than the
high-precision path, which runs direct evaluation in ``mpmath``.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import mpmath
import numpy as np

from .expr import FunExpr, LinearForm, OnLine
from .series import EXACT, FLOAT, MP, Frame, expand, monomials, origin_frame

TAYLOR_ORDER = 16
# switch-over distance for the float64 path; see test_switchover_margin
FLOAT_THRESHOLD = 0.05
# switch-over distance for the high-precision path
PRECISE_THRESHOLD = 1e-3

_S_LINE = LinearForm.of(1, 0)
_T_LINE = LinearForm.of(0, 1)
_ST_LINE = LinearForm.of(1, 1)


class PrecisionError(ArithmeticError):
    """Requested accuracy could not be certified at the working precision."""


@dataclass(frozen=True)
class TaylorPoly:
    """Exact Taylor coefficients at the origin, ``coeffs[(i, j)]`` of ``s^i t^j``."""

    coeffs: dict
    order: int
    nvars: int

    def __getitem__(self, key):
        if isinstance(key, int):
            key = (key, 0)
        return self.coeffs.get(key, Fraction(0))

    def as_list(self) -> list:
        """Univariate coefficients ``[c_0, ..., c_order]`` in ``s``."""
        return [self[(i, 0)] for i in range(self.order + 1)]

    def restrict(self, a, b) -> "TaylorPoly":
        """Series of ``u -> f(a u, b u)``."""
        a, b = Fraction(a), Fraction(b)
        out = {}
        for (i, j), c in self.coeffs.items():
            d = i + j
            out[(d, 0)] = out.get((d, 0), Fraction(0)) + c * a**i * b**j
        return TaylorPoly({k: v for k, v in out.items() if v != 0}, self.order, 1)

    def truncate(self, order: int) -> "TaylorPoly":
        return TaylorPoly({k: v for k, v in self.coeffs.items() if sum(k) <= order}, order, self.nvars)

    def __eq__(self, other):
        if not isinstance(other, TaylorPoly):
            return NotImplemented
        order = min(self.order, other.order)
        a = {k: v for k, v in self.coeffs.items() if sum(k) <= order and v != 0}
        b = {k: v for k, v in other.coeffs.items() if sum(k) <= order and v != 0}
        return a == b

    def __hash__(self):
        return hash(tuple(sorted(self.coeffs.items())))

    def __call__(self, s, t=0.0):
        s = np.asarray(s, dtype=float)
        t = np.asarray(t, dtype=float)
        total = np.zeros(np.broadcast(s, t).shape)
        for (i, j), c in self.coeffs.items():
            total = total + float(c) * s**i * t**j
        return total

    def evaluate_mp(self, s, t=0):
        total = mpmath.mpf(0)
        for (i, j), c in self.coeffs.items():
            total += mpmath.mpf(c.numerator) / c.denominator * s**i * t**j
        return total


def _online_exact(node: OnLine, order: int, frame: Frame):
    # only reached in exact origin frames with one local coordinate
    inner = taylor(node.inner, order).restrict(node.a, node.b)
    coeffs = [inner[(i, 0)] for i in range(order + 1)]
    from .series import Series

    if frame.dims == 1:
        return Series(1, order, coeffs, frame.backend)
    # two local coordinates: u = s
    mons = monomials(2, order)
    c = [Fraction(0)] * len(mons)
    for k, (i, j) in enumerate(mons):
        if j == 0:
            c[k] = coeffs[i]
    return Series(2, order, c, frame.backend)


@lru_cache(maxsize=512)
def taylor(f: FunExpr, order: int) -> TaylorPoly:
    """Exact Taylor coefficients at the origin up to total degree ``order``.

    Raises ``SingularityError`` when some denominator does not divide,
    i.e. the singularity is not removable.
    """
    nvars = max(f.nvars, 1)
    frame = origin_frame(nvars, EXACT, online=_online_exact)
    ser = expand(f, order, frame)
    coeffs = {}
    for m, c in zip(monomials(nvars, order), ser.c):
        if c != 0:
            coeffs[(m[0], m[1] if nvars == 2 else 0)] = c
    return TaylorPoly(coeffs, order, nvars)


# ---------------------------------------------------------------------------
# float path


def _classify(s, t, nvars, thr):
    """Group labels: 0 generic, 1 origin, 2 line s=0, 3 line t=0, 4 line s+t=0."""
    g = np.zeros(s.shape, dtype=np.int8)
    if nvars <= 1:
        g[np.abs(s) < thr] = 1
        return g
    near_s = np.abs(s) < thr
    near_t = np.abs(t) < thr
    near_st = np.abs(s + t) < thr
    g[near_st] = 4
    g[near_t] = 3
    g[near_s] = 2
    g[np.maximum(np.abs(s), np.abs(t)) < 2 * thr] = 1
    return g


def _line_frame(kind, s, t, backend):
    """Frame centred on a singular line with the transversal local coordinate."""
    half = Fraction(1, 2)
    if kind == 2:
        center = {"s": s * 0, "t": t}
        jac = {"s": (Fraction(1),), "t": (Fraction(0),)}
        u = s
        line = _S_LINE
    elif kind == 3:
        center = {"s": s, "t": t * 0}
        jac = {"s": (Fraction(0),), "t": (Fraction(1),)}
        u = t
        line = _T_LINE
    else:
        cs = (s - t) / 2
        center = {"s": cs, "t": -cs}
        jac = {"s": (half,), "t": (half,)}
        u = s + t
        line = _ST_LINE
    frame = Frame(backend, 1, center, jac, lambda form: form.proportional_to(line))
    return frame, u


def _online_float(node: OnLine, order: int, frame: Frame):
    if order != 0:
        raise NotImplementedError("restriction to a line needs order 0 away from the origin")
    from .series import Series

    s = frame.center["s"]
    val = evaluate(node.inner, float(node.a) * s, float(node.b) * s)
    return Series(frame.dims, 0, [val], frame.backend)


def _generic_frame(s, t, backend, online):
    jac = {"s": (Fraction(0),), "t": (Fraction(0),)}
    return Frame(backend, 1, {"s": s, "t": t}, jac, lambda form: False, online)


def evaluate(f: FunExpr, s, t=0.0, *, threshold: float = FLOAT_THRESHOLD, order: int = TAYLOR_ORDER):
    """Vectorised float64 evaluation; removable singularities are handled."""
    s = np.asarray(s, dtype=float)
    t = np.asarray(t, dtype=float)
    shape = np.broadcast(s, t).shape
    s = np.broadcast_to(s, shape).ravel()
    t = np.broadcast_to(t, shape).ravel()
    out = np.empty(s.shape)
    nvars = f.nvars
    if nvars == 0:
        out[:] = float(taylor(f, 0)[0])
        return out.reshape(shape)
    groups = _classify(s, t, nvars, threshold)
    for kind in np.unique(groups):
        mask = groups == kind
        ss, tt = s[mask], t[mask]
        if kind == 0:
            frame = _generic_frame(ss, tt, FLOAT, _online_float)
            out[mask] = np.broadcast_to(expand(f, 0, frame).c[0], ss.shape)
        elif kind == 1:
            out[mask] = taylor(f, order)(ss, tt)
        else:
            out[mask] = _eval_near_line(f, kind, ss, tt, order)
    return out.reshape(shape)


# Points this close to a line need far fewer transversal terms; the
# truncation error stays below 1e-20 for every tier.
_LINE_TIERS = ((0.0, 0), (1e-8, 3), (1e-4, 8))


def _eval_near_line(f, kind, ss, tt, order):
    frame, u = _line_frame(kind, ss, tt, FLOAT)
    au = np.abs(u)
    out = np.empty(ss.shape)
    done = np.zeros(ss.shape, dtype=bool)
    for bound, k in _LINE_TIERS + ((np.inf, order),):
        sel = ~done & (au <= bound)
        if not np.any(sel):
            continue
        sub, uu = _line_frame(kind, ss[sel], tt[sel], FLOAT)
        ser = expand(f, min(k, order), sub)
        out[sel] = np.broadcast_to(ser.evaluate((uu,)), uu.shape)
        done |= sel
    return out


# ---------------------------------------------------------------------------
# high-precision path


def _online_mp(node: OnLine, order: int, frame: Frame):
    if order != 0:
        raise NotImplementedError("restriction to a line needs order 0 away from the origin")
    from .series import Series

    s = frame.center["s"]
    val = _evalf_at(node.inner, node.a * s, node.b * s)[0]
    return Series(frame.dims, 0, [val], frame.backend)


def _evalf_at(f: FunExpr, s, t, threshold=PRECISE_THRESHOLD, order=TAYLOR_ORDER):
    """Value and a truncation-error estimate at the current mpmath precision."""
    s = mpmath.mpf(s)
    t = mpmath.mpf(t)
    nvars = f.nvars
    kind = int(_classify(np.array([float(s)]), np.array([float(t)]), nvars, threshold)[0])
    if nvars == 0:
        return mpmath.mpf(taylor(f, 0)[0].numerator) / taylor(f, 0)[0].denominator, 0
    if kind == 1:
        poly = taylor(f, order)
        top = sum(
            abs(mpmath.mpf(c.numerator) / c.denominator * s**i * t**j)
            for (i, j), c in poly.coeffs.items()
            if i + j == order
        )
        return poly.evaluate_mp(s, t), top
    if kind == 0:
        frame = _generic_frame(s, t, MP, _online_mp)
        return expand(f, 0, frame).c[0], 0
    frame, u = _line_frame(kind, s, t, MP)
    k = 0 if u == 0 else order
    ser = expand(f, k, frame)
    return ser.evaluate((u,)), (ser.top_degree_magnitude((u,)) if k else 0)


def evalf(f: FunExpr, s, t=0.0, precision: float = 1e-15, dps: int = 40):
    """Evaluate to absolute accuracy ``precision`` using ``mpmath``.

    The value is computed at two working precisions; a disagreement larger
    than ``precision``, or a Taylor tail larger than ``precision``, raises
    ``PrecisionError`` (raise ``dps`` and retry).
    """
    with mpmath.workdps(dps):
        v1, tail = _evalf_at(f, s, t)
    with mpmath.workdps(dps + 20):
        v2, _ = _evalf_at(f, s, t)
    err = abs(v1 - v2) + tail
    if err > precision:
        raise PrecisionError(f"estimated error {float(err):.3g} exceeds {precision:.3g} at dps={dps}")
    return float(v2)
