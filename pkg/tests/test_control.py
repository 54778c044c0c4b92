import math

import numpy as np
import pytest

from wncs.control import (
    DiscreteModel,
    Gain,
    LqrWeights,
    RiccatiConvergenceError,
    control_force,
    design_gain,
    discretize,
    lqr_gain,
    riccati_residual,
    riccati_solution,
    spectral_radius,
)
from wncs.plant import LinearModel, PlantParams, PlantState, linearize

GRID = (0.005, 0.0055, 0.006, 0.007, 0.008, 0.009, 0.010, 0.015, 0.030, 0.045)


def test_discretize_zero_interval_limit():
    lm = linearize(PlantParams())
    dm = discretize(lm, 1e-9)
    assert np.max(np.abs(dm.ad - np.eye(4))) < 1e-6
    assert np.max(np.abs(dm.bd)) < 1e-6


def test_discretize_scalar_closed_form():
    lm = LinearModel(np.array([[-1.0]]), np.array([[1.0]]))
    dm = discretize(lm, 1.0)
    assert dm.ad[0, 0] == pytest.approx(math.exp(-1.0), abs=1e-12)
    assert dm.bd[0, 0] == pytest.approx(1.0 - math.exp(-1.0), abs=1e-12)


def test_discretize_nilpotent_is_exact():
    lm = LinearModel(np.array([[0.0, 1.0], [0.0, 0.0]]), np.array([[0.0], [1.0]]))
    t = 0.37
    dm = discretize(lm, t)
    assert np.allclose(dm.ad, [[1.0, t], [0.0, 1.0]], atol=1e-15)
    assert np.allclose(dm.bd.ravel(), [t * t / 2.0, t], atol=1e-15)


def _linear_rk4(a, b, x, u, dt, steps):
    def f(y):
        return a @ y + b.ravel() * u

    for _ in range(steps):
        k1 = f(x)
        k2 = f(x + 0.5 * dt * k1)
        k3 = f(x + 0.5 * dt * k2)
        k4 = f(x + dt * k3)
        x = x + dt / 6.0 * (k1 + 2 * k2 + 2 * k3 + k4)
    return x


def test_discretize_matches_fine_rk4_on_linear_model():
    lm = linearize(PlantParams())
    t = 0.01
    dm = discretize(lm, t)
    x0 = np.array([0.1, 0.02, -0.3, 0.4])
    u = 0.7
    via_zoh = dm.ad @ x0 + dm.bd.ravel() * u
    via_rk4 = _linear_rk4(lm.a, lm.b, x0.copy(), u, t / 1000.0, 1000)
    assert np.max(np.abs(via_zoh - via_rk4)) < 1e-8


def test_lqr_scalar_golden_ratio():
    dm = DiscreteModel(np.array([[1.0]]), np.array([[1.0]]), 1.0)
    w = LqrWeights(state_weights=(1.0,), control_weight=1.0)
    gain = lqr_gain(dm, w)
    assert gain.k[0] == pytest.approx((math.sqrt(5.0) - 1.0) / 2.0, abs=1e-6)
    p = riccati_solution(dm, w)
    assert p[0, 0] == pytest.approx((1.0 + math.sqrt(5.0)) / 2.0, abs=1e-6)


def test_lqr_scalar_deadbeat_plant():
    dm = DiscreteModel(np.array([[0.0]]), np.array([[1.0]]), 1.0)
    w = LqrWeights(state_weights=(1.0,), control_weight=1.0)
    assert lqr_gain(dm, w).k[0] == pytest.approx(0.0, abs=1e-12)
    assert riccati_solution(dm, w)[0, 0] == pytest.approx(1.0, abs=1e-12)


def test_lqr_uncontrollable_unstable_mode_raises():
    dm = DiscreteModel(np.array([[2.0]]), np.array([[0.0]]), 1.0)
    w = LqrWeights(state_weights=(1.0,), control_weight=1.0)
    with pytest.raises(RiccatiConvergenceError):
        lqr_gain(dm, w)


def test_riccati_residual_small_across_grid():
    lm = linearize(PlantParams())
    w = LqrWeights()
    tol = 1e-10
    for t in GRID:
        dm = discretize(lm, t)
        p = riccati_solution(dm, w, tol=tol)
        assert riccati_residual(dm, w, p) < 10.0 * tol


def test_closed_loop_stable_for_every_designed_gain():
    lm = linearize(PlantParams())
    w = LqrWeights()
    for t in GRID:
        dm = discretize(lm, t)
        gain = lqr_gain(dm, w)
        k = np.array(gain.k).reshape(1, 4)
        assert spectral_radius(dm.ad - dm.bd @ k) < 1.0


def test_value_iteration_trace_is_nondecreasing():
    # independent re-implementation of the recursion, watching the trace
    lm = linearize(PlantParams())
    dm = discretize(lm, 0.01)
    q = np.diag([0.5, 0.5, 0.0, 0.0])
    r = np.array([[3.0]])
    p = q.copy()
    prev_trace = np.trace(p)
    for _ in range(100_000):
        btp = dm.bd.T @ p
        k = np.linalg.solve(r + btp @ dm.bd, btp @ dm.ad)
        p_next = q + dm.ad.T @ p @ dm.ad - (dm.ad.T @ p @ dm.bd) @ k
        delta = np.max(np.abs(p_next - p))
        p = p_next
        trace = np.trace(p)
        assert trace >= prev_trace - 1e-9
        prev_trace = trace
        if delta < 1e-11:
            break
    reference = riccati_solution(dm, LqrWeights())
    assert np.max(np.abs(p - reference)) / np.max(np.abs(reference)) < 1e-9


def test_control_force_reference_shift_and_clamp():
    gain = Gain((1.0, 0.0, 0.0, 0.0))
    state = PlantState(q=3.0)
    assert control_force(gain, state, 3.0) == 0.0
    assert control_force(Gain((1.0, 0.0, 0.0, 0.0)), PlantState(q=2.0), 0.0) == -2.0
    assert control_force(gain, PlantState(q=-10.0), 0.0, force_limit=5.0) == 5.0
    assert control_force(gain, PlantState(q=10.0), 0.0, force_limit=5.0) == -5.0


def test_spectral_radius_reference_cases():
    assert spectral_radius(np.eye(4)) == pytest.approx(1.0, abs=1e-8)
    assert spectral_radius(np.diag([0.5, -0.9, 0.1, 0.0])) == pytest.approx(0.9, abs=1e-8)
    rot = np.zeros((4, 4))
    rot[0, 1] = -1.0
    rot[1, 0] = 1.0
    assert spectral_radius(rot) == pytest.approx(1.0, abs=1e-8)


def test_spectral_radius_rejects_non_finite():
    m = np.eye(2)
    m[0, 0] = math.nan
    with pytest.raises(ValueError):
        spectral_radius(m)


def test_design_gain_end_to_end():
    gain = design_gain(linearize(PlantParams()), 0.01, LqrWeights())
    assert len(gain.k) == 4
    assert all(map(math.isfinite, gain.k))


def test_discretize_against_scipy_expm():
    scipy_linalg = pytest.importorskip("scipy.linalg")
    rng = np.random.default_rng(4)
    for _ in range(20):
        a = rng.normal(size=(4, 4))
        b = rng.normal(size=(4, 1))
        t = float(rng.uniform(0.001, 0.8))
        dm = discretize(LinearModel(a, b), t)
        aug = np.zeros((5, 5))
        aug[:4, :4] = a
        aug[:4, 4:] = b
        ref = scipy_linalg.expm(aug * t)
        assert np.max(np.abs(dm.ad - ref[:4, :4])) < 1e-10 * max(1.0, np.max(np.abs(ref)))
        assert np.max(np.abs(dm.bd - ref[:4, 4:])) < 1e-10 * max(1.0, np.max(np.abs(ref)))


def test_riccati_against_scipy_dare():
    scipy_linalg = pytest.importorskip("scipy.linalg")
    lm = linearize(PlantParams())
    w = LqrWeights()
    for t in (0.005, 0.01, 0.045):
        dm = discretize(lm, t)
        p_iter = riccati_solution(dm, w, tol=1e-12)
        p_ref = scipy_linalg.solve_discrete_are(
            dm.ad, dm.bd, np.diag(w.state_weights), np.array([[w.control_weight]])
        )
        assert np.max(np.abs(p_iter - p_ref)) / np.max(np.abs(p_ref)) < 1e-8


def test_weights_validation():
    with pytest.raises(ValueError):
        LqrWeights(state_weights=(0.0, 0.0, 0.0, 0.0))
    with pytest.raises(ValueError):
        LqrWeights(state_weights=(0.5, -0.1, 0.0, 0.0))
    with pytest.raises(ValueError):
        LqrWeights(control_weight=0.0)
