"""Finite-dimensional matrix model for numerical verification.

A model is a Hermitian ``h`` together with four anti-Hermitian generators
``A_i``; the derivations are ``delta_i(x) = A_i x - x A_i`` and the trace is
``phi0(x) = tr(x) / n``.  Functions of the modular derivation act through the
spectrum of ``h``: in its eigenbasis ``(nabla x)_{ij} = (l_j - l_i) x_{ij}``.

By default the generators are independent random matrices, so the
derivations need not commute.  Every identity checked here is stated per
derivation and does not rely on commutativity; ``commuting=True`` gives
diagonal generators for the faithful torus analogue.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np
import scipy.linalg

from .ncsymbol import DELTA_EXP_H, DELTA_H, DIM, EXP_H, Atom, SymbolExpr
from .specfun import FunExpr, evaluate

PI2 = math.pi**2


@dataclass(frozen=True)
class SpectralData:
    evals: np.ndarray
    vecs: np.ndarray
    diff: np.ndarray  # diff[i, j] = l_j - l_i


@dataclass(frozen=True, eq=False)
class MatrixModel:
    h: np.ndarray
    gens: tuple
    _cache: dict = field(default_factory=dict, repr=False, compare=False)

    def __post_init__(self):
        if self.h.ndim != 2 or self.h.shape[0] != self.h.shape[1] or self.h.shape[0] < 2:
            raise ValueError("h must be a square matrix of size >= 2")
        if len(self.gens) != DIM:
            raise ValueError(f"need {DIM} derivation generators")

    @property
    def dim(self) -> int:
        return self.h.shape[0]

    @cached_property
    def spectral(self) -> SpectralData:
        if not np.allclose(self.h, self.h.conj().T, atol=1e-12):
            raise ValueError("h is not Hermitian; no eigen-decomposition")
        lam, U = scipy.linalg.eigh(self.h)
        return SpectralData(lam, U, lam[None, :] - lam[:, None])

    def with_h(self, h: np.ndarray) -> "MatrixModel":
        return MatrixModel(np.asarray(h, dtype=complex), self.gens)

    def exp_h(self, sign: int = 1) -> np.ndarray:
        key = ("exp", sign)
        if key not in self._cache:
            sp = self.spectral
            self._cache[key] = (sp.vecs * np.exp(sign * sp.evals)) @ sp.vecs.conj().T
        return self._cache[key]

    def to_eigen(self, x):
        U = self.spectral.vecs
        return U.conj().T @ x @ U

    def from_eigen(self, x):
        U = self.spectral.vecs
        return U @ x @ U.conj().T

    def table(self, f: FunExpr, m: int) -> np.ndarray:
        """Values of ``f`` on the eigenvalue differences (cached per function)."""
        key = ("table", id(f), m)
        hit = self._cache.get(key)
        if hit is not None and hit[0] is f:
            return hit[1]
        D = self.spectral.diff
        if m == 1:
            vals = evaluate(f, D)
        else:
            # F(l_k - l_i, l_j - l_k) indexed [i, k, j]
            vals = evaluate(f, D[:, :, None], D[None, :, :])
        self._cache[key] = (f, vals)
        return vals


def _random_hermitian(rng, n):
    z = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    return (z + z.conj().T) / 2


def random_hermitian(rng: np.random.Generator, n: int, norm: float | None = None) -> np.ndarray:
    x = _random_hermitian(rng, n)
    if norm is not None:
        x *= norm / np.linalg.norm(x, 2)
    return x


def random_generators(rng: np.random.Generator, n: int, commuting: bool = False) -> tuple:
    if commuting:
        return tuple(np.diag(1j * rng.standard_normal(n)) for _ in range(DIM))
    return tuple(1j * random_hermitian(rng, n) / math.sqrt(n) for _ in range(DIM))


def random_model(rng: np.random.Generator, dim: int, hnorm: float = 2.0, commuting: bool = False) -> MatrixModel:
    """Random model with ``||h|| = u * hnorm``, ``u`` uniform in [0.1, 1]."""
    h = random_hermitian(rng, dim, hnorm * rng.uniform(0.1, 1.0))
    return MatrixModel(h, random_generators(rng, dim, commuting))


def random_unitary(rng: np.random.Generator, n: int) -> np.ndarray:
    z = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    q, r = np.linalg.qr(z)
    return q * (np.diag(r) / np.abs(np.diag(r)))


def random_projection(rng: np.random.Generator, n: int, rank: int | None = None) -> np.ndarray:
    if rank is None:
        rank = int(rng.integers(1, n))
    V = random_unitary(rng, n)
    d = np.zeros(n)
    d[:rank] = 1.0
    return (V * d) @ V.conj().T


def phi0(x: np.ndarray) -> complex:
    return np.trace(x) / x.shape[0]


def delta(model: MatrixModel, i: int, x: np.ndarray) -> np.ndarray:
    A = model.gens[i - 1]
    return A @ x - x @ A


def delta_multi(model: MatrixModel, alpha: tuple, x: np.ndarray) -> np.ndarray:
    """``delta_1^{a1} ... delta_4^{a4} x`` with ``delta_4`` applied first."""
    for i in range(DIM, 0, -1):
        for _ in range(alpha[i - 1]):
            x = delta(model, i, x)
    return x


def nabla(model: MatrixModel, x: np.ndarray) -> np.ndarray:
    return model.from_eigen(model.spectral.diff * model.to_eigen(x))


def apply_modfun(model: MatrixModel, F: FunExpr, *args: np.ndarray) -> np.ndarray:
    """``F(nabla, ..., nabla)(args_1 ... args_m)`` for ``m`` in {1, 2}."""
    m = len(args)
    if m == 1:
        x = model.to_eigen(args[0])
        return model.from_eigen(model.table(F, 1) * x)
    if m == 2:
        x, y = (model.to_eigen(a) for a in args)
        out = np.einsum("ikj,ik,kj->ij", model.table(F, 2), x, y)
        return model.from_eigen(out)
    raise ValueError("only one- and two-argument functions are supported")


def apply_modfun_pairs(model: MatrixModel, F: FunExpr, pairs) -> np.ndarray:
    """``sum_l F(nabla, nabla)(x_l y_l)`` with a single table of ``F``."""
    acc = 0
    for x, y in pairs:
        xe, ye = model.to_eigen(x), model.to_eigen(y)
        acc = acc + xe[:, :, None] * ye[None, :, :]
    return model.from_eigen(np.einsum("ikj,ikj->ij", model.table(F, 2), acc))


def eval_curvature(model: MatrixModel, k: FunExpr, H: FunExpr) -> np.ndarray:
    """``e^{-h}[k(nabla)(sum_i delta_i^2 h) + H(nabla, nabla)(sum_i delta_i(h)^2)]``."""
    firsts = [delta(model, i, model.h) for i in range(1, DIM + 1)]
    second = sum(delta(model, i, d) for i, d in zip(range(1, DIM + 1), firsts))
    val = apply_modfun(model, k, second) + apply_modfun_pairs(model, H, [(d, d) for d in firsts])
    return model.exp_h(-1) @ val


def atom_matrix(model: MatrixModel, atom: Atom) -> np.ndarray:
    key = ("atom", atom)
    if key in model._cache:
        return model._cache[key]
    if atom.kind == EXP_H:
        out = model.exp_h(atom.sign)
    elif atom.kind == DELTA_EXP_H:
        out = delta_multi(model, atom.index, model.exp_h(atom.sign))
    elif atom.kind == DELTA_H:
        out = delta_multi(model, atom.index, model.h)
    else:
        raise ValueError(atom)
    model._cache[key] = out
    return out


def eval_word(model: MatrixModel, word) -> np.ndarray:
    out = np.eye(model.dim, dtype=complex)
    for a in word:
        out = out @ atom_matrix(model, a)
    return out


def eval_ncexpression(model: MatrixModel, x: SymbolExpr) -> np.ndarray:
    """Matrix value of a xi-free expression (``pi^2`` as a float here only)."""
    if not x.is_xi_free():
        raise ValueError("expression depends on xi")
    out = np.zeros((model.dim, model.dim), dtype=complex)
    for c, p, _, word in x.terms:
        out += float(c) * (PI2 if p else 1.0) * eval_word(model, word)
    return out


def eval_modexpr(model: MatrixModel, m) -> np.ndarray:
    out = np.zeros((model.dim, model.dim), dtype=complex)
    em = model.exp_h(-1)
    for term in m:
        args = [atom_matrix(model, a) for a in term.args]
        val = apply_modfun(model, term.func, *args)
        out += float(term.coeff) * (PI2 if term.pi2 else 1.0) * (em @ val)
    return out


# ---------------------------------------------------------------------------
# action and gradient


def _T():
    from .specfun.library import T

    return _cached("T", T)


_FUNCS: dict = {}


def _cached(name, builder):
    if name not in _FUNCS:
        _FUNCS[name] = builder()
    return _FUNCS[name]


def action(model: MatrixModel) -> float:
    """``sum_i phi0(e^{-h} T(nabla)(delta_i h) delta_i h)``."""
    T = _T()
    em = model.exp_h(-1)
    total = 0.0
    for i in range(1, DIM + 1):
        dh = delta(model, i, model.h)
        total += phi0(em @ apply_modfun(model, T, dh) @ dh)
    return float(np.real(total))


def action_scalar(model: MatrixModel) -> float:
    """Same value written as an eigenbasis sum of weighted squared moduli."""
    T = _T()
    sp = model.spectral
    tab = model.table(T, 1)
    w = np.exp(-sp.evals)[:, None] * tab
    total = 0.0
    for i in range(1, DIM + 1):
        x = model.to_eigen(delta(model, i, model.h))
        total += np.sum(w * np.abs(x) ** 2)
    return float(total) / model.dim


def gradient_element(model: MatrixModel, variant: str = "stated") -> np.ndarray:
    """``sum_i e^{-h}[omega1(nabla)(delta_i^2 h) + omega2(nabla, nabla)(delta_i h, delta_i h)]``.

    ``variant="stated"`` uses ``omega2 = E + L - P - Q`` with ``Q`` built from ``T``;
    ``variant="corrected"`` uses ``Q = P(Gbar)``.
    """
    from .specfun.library import omega1, omega2, omega2_corrected

    builders = {"stated": omega2, "corrected": omega2_corrected}
    if variant not in builders:
        raise ValueError(f"unknown variant {variant!r}")
    w1, w2 = _cached("omega1", omega1), _cached(f"omega2_{variant}", builders[variant])
    acc = np.zeros((model.dim, model.dim), dtype=complex)
    for i in range(1, DIM + 1):
        d1 = delta(model, i, model.h)
        d2 = delta(model, i, d1)
        acc += apply_modfun(model, w1, d2) + apply_modfun(model, w2, d1, d1)
    return model.exp_h(-1) @ acc


@dataclass(frozen=True)
class GradientCheck:
    fd: float
    pairing: float
    rel_error: float


def gradient_check(model: MatrixModel, a: np.ndarray, eps: float = 1e-4, variant: str = "stated") -> GradientCheck:
    """Richardson-extrapolated central difference vs ``phi0(a Grad)``."""
    if not 0 < eps < 1e-2:
        raise ValueError("eps must lie in (0, 1e-2)")

    def central(e):
        up = action(model.with_h(model.h + e * a))
        dn = action(model.with_h(model.h - e * a))
        return (up - dn) / (2 * e)

    fd = (4 * central(eps / 2) - central(eps)) / 3
    pairing = float(np.real(phi0(a @ gradient_element(model, variant))))
    diff = abs(fd - pairing)
    scale = max(abs(fd), abs(pairing))
    rel = 0.0 if diff == 0 else diff / scale
    return GradientCheck(fd, pairing, rel)


def selfadjointness_defect(x: np.ndarray) -> float:
    return float(np.linalg.norm(x - x.conj().T, 2))


# ---------------------------------------------------------------------------
# verification suites

SUITES = ("identities", "curvature", "projection", "gradient", "positivity")
TOLERANCES = {"identities": 1e-10, "curvature": 1e-10, "projection": 1e-9, "gradient": 1e-6, "positivity": 1e-12}


def _trial_rngs(seed: int, trials: int) -> list:
    return [np.random.default_rng(ss) for ss in np.random.SeedSequence(seed).spawn(trials)]


def _maxdiff(a, b) -> float:
    return float(np.max(np.abs(a - b)))


def identity_errors(model: MatrixModel, rng: np.random.Generator) -> dict:
    """Worst entry error of every rewrite rule and substitution identity on one model."""
    from .modcalc import substitute_exponential_derivatives
    from .ncsymbol import E_PLUS, delta_exp_h, unit
    from .specfun import exp
    from .specfun.library import H, T, g1, g2, k
    from .specfun import rename

    G1, G2 = _cached("g1", g1), _cached("g2", g2)
    n = model.dim
    em, ep = model.exp_h(-1), model.exp_h(1)
    err: dict = {}

    def note(name, value):
        err[name] = max(err.get(name, 0.0), value)

    for i in range(1, DIM + 1):
        dh = delta(model, i, model.h)
        note("R1_first", _maxdiff(em @ delta(model, i, ep), apply_modfun(model, G1, dh)))
        lhs = em @ delta(model, i, delta(model, i, ep))
        rhs = apply_modfun(model, G1, delta(model, i, dh)) + 2 * apply_modfun(model, G2, dh, dh)
        note("R1_second", _maxdiff(lhs, rhs))
        rhs = apply_modfun(model, _cached("e^{-s}-1/s", lambda: (exp(-1) - 1) / _var_s()), dh)
        note("log_derivative", _maxdiff(ep @ delta(model, i, em), rhs))
    for j in range(1, DIM + 1):
        for kk in range(j + 1, DIM + 1):
            alpha = tuple(a + b for a, b in zip(unit(j), unit(kk)))
            dj, dk = delta(model, j, model.h), delta(model, kk, model.h)
            lhs = em @ delta_multi(model, alpha, ep)
            rhs = (
                apply_modfun(model, G1, delta_multi(model, alpha, model.h))
                + apply_modfun(model, G2, dj, dk)
                + apply_modfun(model, G2, dk, dj)
            )
            note("R1_mixed", _maxdiff(lhs, rhs))

    x, y = random_hermitian(rng, n), random_hermitian(rng, n)
    for F in (_cached("g1", g1), _cached("k", k), _cached("T", T)):
        note("R2_unary", _maxdiff(apply_modfun(model, F, x) @ em, em @ apply_modfun(model, exp(-1) * F, x)))
        other = _cached("k", k)
        merged = F * rename(other, s="t")
        note("R3", _maxdiff(apply_modfun(model, F, x) @ apply_modfun(model, other, y), apply_modfun(model, merged, x, y)))
    for F in (G2, _cached("H", H)):
        lhs = apply_modfun(model, F, x, y) @ em
        note("R2_binary", _maxdiff(lhs, em @ apply_modfun(model, exp(-1, -1) * F, x, y)))
    note("R4", _maxdiff(ep @ em, np.eye(n)))
    note("modular_exp", _maxdiff(apply_modfun(model, exp(1), x), em @ x @ ep))
    F = _cached("k", k)
    note("adjoint", _maxdiff(apply_modfun(model, F, x).conj().T, apply_modfun(model, F(-_var_s()), x.conj().T)))

    for word in _sample_words():
        ref = eval_ncexpression(model, word)
        note("rewrite", _maxdiff(ref, eval_modexpr(model, substitute_exponential_derivatives(word))))
    return err


def _var_s():
    from .specfun import s

    return s


_WORDS: list = []


def _sample_words() -> list:
    """Words exercised by the rewrite check: the curvature integrand and mixed cases."""
    if not _WORDS:
        from .ncsymbol import E_MINUS, delta_exp_h
        from .parametrix import parametrix_term
        from .sphere import integrate_on_sphere

        raw = integrate_on_sphere(parametrix_term(2))
        _WORDS.extend(SymbolExpr.from_terms([term]) for term in raw.terms)
        d1, d2, d12 = delta_exp_h((1, 0, 0, 0)), delta_exp_h((0, 1, 0, 0)), delta_exp_h((1, 1, 0, 0))
        for word in ([E_MINUS, d12, E_MINUS], [E_MINUS, d1, E_MINUS, d2, E_MINUS], [E_MINUS, d2, E_MINUS, d1, E_MINUS]):
            _WORDS.append(SymbolExpr.monomial(1, word))
    return _WORDS


def _dims(dims) -> tuple:
    lo, hi = dims
    if not 2 <= lo <= hi:
        raise ValueError("dims must satisfy 2 <= lo <= hi")
    return lo, hi


def run_suite(suite: str, trials: int = 100, dims=(2, 8), seed: int = 0, variant: str = "stated") -> dict:
    """Run one verification suite; the report is JSON-serialisable."""
    if suite not in SUITES:
        raise ValueError(f"unknown suite {suite!r}; choose from {', '.join(SUITES)}")
    lo, hi = _dims(dims)
    report = {"suite": suite, "seed": seed, "trials": trials, "dims": [lo, hi], "tolerance": TOLERANCES[suite]}
    worst = 0.0
    rngs = _trial_rngs(seed, trials)
    if suite == "identities":
        per_rule: dict = {}
        for rng in rngs:
            model = random_model(rng, int(rng.integers(lo, hi + 1)))
            for name, e in identity_errors(model, rng).items():
                per_rule[name] = max(per_rule.get(name, 0.0), e)
        worst = max(per_rule.values(), default=0.0)
        report["per_rule"] = per_rule
    elif suite == "curvature":
        from .geometry import derive_curvature

        cur = derive_curvature()
        defect = 0.0
        for rng in rngs:
            model = random_model(rng, int(rng.integers(lo, hi + 1)))
            r_mod = eval_modexpr(model, cur.modular)
            worst = max(worst, _maxdiff(eval_ncexpression(model, cur.raw), r_mod))
            defect = max(defect, selfadjointness_defect(r_mod))
        report["selfadjointness_defect"] = defect
    elif suite == "projection":
        worst = _projection_suite(rngs, lo, hi, report)
    elif suite == "gradient":
        for rng in rngs:
            n = int(rng.integers(lo, hi + 1))
            model = random_model(rng, n)
            worst = max(worst, gradient_check(model, random_hermitian(rng, n), 1e-4, variant).rel_error)
        report["omega2"] = variant
    elif suite == "positivity":
        low = np.inf
        for rng in rngs:
            low = min(low, action(random_model(rng, int(rng.integers(lo, hi + 1)))))
        report["min_action"] = float(low)
        worst = max(0.0, -float(low))
    report["max_error"] = float(worst)
    report["verdict"] = "pass" if worst < TOLERANCES[suite] else "fail"
    return report


PROJECTION_S = (0.5, -0.5, 1.0, -1.0, 2.0, -2.0)


def projection_check(model_gens: tuple, p: np.ndarray, s_value: float, coeffs, k: FunExpr, H: FunExpr) -> float:
    """Max entry error between the general formula at ``h = s p`` and the reduced one.

    ``coeffs`` are four functions of ``s`` or their four values at ``s_value``;
    both sides omit the ``pi^2`` factor.
    """
    model = MatrixModel(s_value * p.astype(complex), model_gens)
    general = eval_curvature(model, k, H)
    X = sum(delta(model, i, delta(model, i, p)) for i in range(1, DIM + 1))
    basis = (X, X @ p, p @ X, p @ X @ p)
    vals = [c if isinstance(c, float) else float(evaluate(c, s_value)) for c in coeffs]
    reduced = model.exp_h(-1) @ sum(v * b for v, b in zip(vals, basis))
    return _maxdiff(general, reduced)


def _projection_suite(rngs, lo, hi, report) -> float:
    from .geometry import derive_curvature, derive_projection_curvature

    cur = derive_curvature()
    pc = derive_projection_curvature()
    values = {sv: [float(evaluate(c, sv)) for c in pc.f] for sv in PROJECTION_S}
    worst = 0.0
    for rng in rngs:
        n = int(rng.integers(lo, hi + 1))
        p = random_projection(rng, n)
        gens = random_generators(rng, n)
        for sv in PROJECTION_S:
            worst = max(worst, projection_check(gens, p, sv, values[sv], cur.k, cur.H))
    report["normalization"] = str(pc.normalization)
    report["printed_matches"] = {f"f{i + 1}": ok for i, ok in enumerate(pc.matches)}
    report["note"] = pc.note
    return worst
