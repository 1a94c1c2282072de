"""Finite-dimensional matrix model: calculus, action, gradient and suites."""
import json

import numpy as np
import pytest
import scipy.linalg
from hypothesis import given, settings
from hypothesis import strategies as st

from nctorus.geometry import derive_curvature
from nctorus.ncsymbol import E_MINUS, E_PLUS, SymbolExpr
from nctorus.oracle import (
    PI2,
    SUITES,
    MatrixModel,
    action,
    action_scalar,
    apply_modfun,
    delta,
    eval_curvature,
    eval_ncexpression,
    eval_word,
    gradient_check,
    gradient_element,
    nabla,
    phi0,
    random_generators,
    random_hermitian,
    random_model,
    random_projection,
    run_suite,
    selfadjointness_defect,
)
from nctorus.specfun import exp, s
from nctorus.specfun.library import T, g1, k


def diag_model(lams, rng):
    h = np.diag(np.asarray(lams, dtype=complex))
    return MatrixModel(h, random_generators(rng, len(lams)))


def test_nabla_on_elementary_matrix(rng):
    model = diag_model([0.3, -1.1], rng)
    E12 = np.array([[0, 1], [0, 0]], dtype=complex)
    assert np.allclose(nabla(model, E12), (-1.1 - 0.3) * E12)
    modular = apply_modfun(model, exp(1), E12)
    assert np.allclose(modular, np.exp(-1.4) * E12)
    assert np.allclose(modular, model.exp_h(-1) @ E12 @ model.exp_h(1))


def test_non_hermitian_rejected(rng):
    model = MatrixModel(np.array([[0, 1], [0, 0]], dtype=complex), random_generators(rng, 2))
    with pytest.raises(ValueError):
        apply_modfun(model, g1(), np.eye(2))


def test_model_validation(rng):
    with pytest.raises(ValueError):
        MatrixModel(np.zeros((3, 2)), random_generators(rng, 3))
    with pytest.raises(ValueError):
        MatrixModel(np.zeros((3, 3)), random_generators(rng, 3)[:2])


@settings(max_examples=20)
@given(st.integers(2, 7), st.integers(0, 2**31))
def test_derivation_and_trace_properties(n, seed):
    rng = np.random.default_rng(seed)
    model = random_model(rng, n)
    x, y = random_hermitian(rng, n) + 1j * random_hermitian(rng, n), random_hermitian(rng, n)
    for i in range(1, 5):
        assert np.allclose(delta(model, i, x @ y), delta(model, i, x) @ y + x @ delta(model, i, y))
        assert np.allclose(delta(model, i, x.conj().T), delta(model, i, x).conj().T)
        assert abs(phi0(delta(model, i, x))) < 1e-12
    assert abs(phi0(x @ y) - phi0(y @ x)) < 1e-12


def test_modular_group_and_adjoint(rng):
    model = random_model(rng, 6)
    x = random_hermitian(rng, 6) + 1j * random_hermitian(rng, 6)
    assert np.max(np.abs(apply_modfun(model, exp(1), x) - model.exp_h(-1) @ x @ model.exp_h(1))) < 1e-12
    F = k()
    assert np.allclose(apply_modfun(model, F, x).conj().T, apply_modfun(model, F(-s), x.conj().T), atol=1e-12)


def test_first_substitution_identity(rng):
    for n in range(4, 9):
        model = random_model(rng, n)
        for i in range(1, 5):
            lhs = model.exp_h(-1) @ delta(model, i, model.exp_h(1))
            rhs = apply_modfun(model, g1(), delta(model, i, model.h))
            assert np.max(np.abs(lhs - rhs)) < 1e-10


def test_log_derivative_identity(rng):
    model = random_model(rng, 5)
    lhs = model.exp_h(1) @ delta(model, 2, model.exp_h(-1))
    rhs = apply_modfun(model, (exp(-1) - 1) / s, delta(model, 2, model.h))
    assert np.max(np.abs(lhs - rhs)) < 1e-10


def test_derivative_of_exponential(rng):
    model = random_model(rng, 5)
    a = random_hermitian(rng, 5)
    eps = 1e-5
    fd = (scipy.linalg.expm(-model.h - eps * a) - scipy.linalg.expm(-model.h + eps * a)) / (2 * eps)
    formula = apply_modfun(model, (1 - exp(1)) / s, a) @ model.exp_h(-1)
    assert np.max(np.abs(fd - formula)) < 1e-8


def test_exponential_word_is_identity(rng):
    model = random_model(rng, 4)
    assert np.allclose(eval_word(model, [E_MINUS, E_PLUS]), np.eye(4))


def test_flat_case(rng):
    gens = random_generators(rng, 5)
    model = MatrixModel(0.7 * np.eye(5, dtype=complex), gens)
    cur = derive_curvature()
    assert np.max(np.abs(eval_ncexpression(model, cur.raw))) < 1e-13
    assert np.max(np.abs(eval_curvature(model, cur.k, cur.H))) < 1e-13
    assert abs(action(model)) < 1e-14


def test_curvature_two_paths(rng):
    cur = derive_curvature()
    model = random_model(rng, 5)
    raw = eval_ncexpression(model, cur.raw)
    modular = PI2 * eval_curvature(model, cur.k, cur.H)
    assert np.max(np.abs(raw - modular)) < 1e-10


def test_trace_of_curvature_is_minus_two_pi2_action(rng):
    cur = derive_curvature()
    for n in (3, 6):
        model = random_model(rng, n)
        R = eval_ncexpression(model, cur.raw)
        assert abs(phi0(R) + 2 * PI2 * action(model)) < 1e-10


def test_curvature_selfadjointness_is_measured(rng):
    cur = derive_curvature()
    model = random_model(rng, 5)
    defect = selfadjointness_defect(eval_ncexpression(model, cur.raw))
    assert np.isfinite(defect)


def test_action_two_by_two_hand_expansion():
    mu = 0.9
    h = np.diag([0.0, mu]).astype(complex)
    A = 1j * np.array([[0, 1], [1, 0]], dtype=complex)
    zero = np.zeros((2, 2), dtype=complex)
    model = MatrixModel(h, (A, zero, zero, zero))
    c = A @ h - h @ A
    Tf = T()
    from nctorus.specfun import evaluate

    lam = [0.0, mu]
    want = sum(
        np.exp(-lam[i]) * evaluate(Tf, lam[j] - lam[i]) * abs(c[i, j]) ** 2 for i in range(2) for j in range(2)
    ) / 2
    assert action(model) == pytest.approx(want, rel=1e-13)
    assert action_scalar(model) == pytest.approx(want, rel=1e-13)


def test_action_matches_scalar_form(rng):
    for n in (2, 5, 8):
        model = random_model(rng, n)
        assert action(model) == pytest.approx(action_scalar(model), rel=1e-12)


def test_action_nonnegative(rng):
    assert min(action(random_model(rng, int(rng.integers(2, 9)))) for _ in range(300)) >= -1e-12


def test_gradient_zero_direction(rng):
    model = random_model(rng, 4)
    g = gradient_check(model, np.zeros((4, 4)))
    assert g.fd == 0 and g.pairing == 0 and g.rel_error == 0


@pytest.mark.parametrize("variant", ["stated", "corrected"])
def test_gradient_identity_direction(rng, variant):
    model = random_model(rng, 5)
    g = gradient_check(model, np.eye(5), variant=variant)
    assert g.rel_error < 1e-6


def test_gradient_corrected_matches_finite_differences(rng):
    for _ in range(10):
        n = int(rng.integers(2, 7))
        model = random_model(rng, n)
        assert gradient_check(model, random_hermitian(rng, n), variant="corrected").rel_error < 1e-6


def test_gradient_as_assembled_does_not(rng):
    worst = max(
        gradient_check(m, random_hermitian(rng, m.dim), variant="stated").rel_error
        for m in (random_model(rng, int(rng.integers(3, 7))) for _ in range(10))
    )
    assert worst > 1e-4


def test_gradient_rejects_bad_inputs(rng):
    model = random_model(rng, 3)
    with pytest.raises(ValueError):
        gradient_check(model, np.eye(3), eps=0.5)
    with pytest.raises(ValueError):
        gradient_element(model, variant="other")


def test_random_projection(rng):
    p = random_projection(rng, 6, 2)
    assert np.allclose(p @ p, p) and np.allclose(p, p.conj().T)
    assert np.trace(p).real == pytest.approx(2)


def test_suite_report_schema_and_determinism():
    a = run_suite("positivity", trials=20, dims=(2, 5), seed=3)
    b = run_suite("positivity", trials=20, dims=(2, 5), seed=3)
    assert a == b
    json.dumps(a)
    for key in ("suite", "seed", "trials", "dims", "tolerance", "max_error", "verdict"):
        assert key in a
    assert a["verdict"] == "pass"


@pytest.mark.parametrize("suite", [s for s in SUITES if s != "gradient"])
def test_small_suites_pass(suite):
    assert run_suite(suite, trials=3, dims=(2, 5), seed=1)["verdict"] == "pass"


def test_suite_errors():
    with pytest.raises(ValueError):
        run_suite("nope")
    with pytest.raises(ValueError):
        run_suite("positivity", dims=(1, 4))


def test_commuting_generators(rng):
    gens = random_generators(rng, 4, commuting=True)
    for a in gens:
        for b in gens:
            assert np.allclose(a @ b, b @ a)
