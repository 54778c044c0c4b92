"""Discrete-time LQR design: ZOH discretization, Riccati value iteration, control law."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .plant import LinearModel, PlantState


class DiscretizationError(RuntimeError):
    """Raised when the matrix exponential series produces non-finite entries."""


class RiccatiConvergenceError(RuntimeError):
    """Raised when the Riccati fixed-point iteration diverges or stalls."""


class UnstableDesignError(RuntimeError):
    """Raised when a designed gain fails to stabilize the discrete loop."""


@dataclass(frozen=True)
class DiscreteModel:
    """Sampled-data model x[k+1] = ad x[k] + bd u[k] at interval t_ctr."""

    ad: np.ndarray
    bd: np.ndarray
    t_ctr: float

    def __post_init__(self):
        ad = np.asarray(self.ad, dtype=float)
        bd = np.asarray(self.bd, dtype=float).reshape(ad.shape[0], -1)
        if not (np.all(np.isfinite(ad)) and np.all(np.isfinite(bd))):
            raise ValueError("discrete model entries must be finite")
        if not self.t_ctr > 0:
            raise ValueError("t_ctr must be > 0")
        object.__setattr__(self, "ad", ad)
        object.__setattr__(self, "bd", bd)


@dataclass(frozen=True)
class LqrWeights:
    """Diagonal state weights and a positive scalar control weight."""

    state_weights: tuple[float, ...] = (0.5, 0.5, 0.0, 0.0)
    control_weight: float = 3.0

    def __post_init__(self):
        object.__setattr__(self, "state_weights", tuple(float(w) for w in self.state_weights))
        if any(w < 0 for w in self.state_weights):
            raise ValueError("state_weights must be nonnegative")
        if not any(w > 0 for w in self.state_weights):
            raise ValueError("at least one state weight must be positive")
        if not self.control_weight > 0:
            raise ValueError("control_weight must be > 0")


@dataclass(frozen=True)
class Gain:
    """State-feedback row k for u = -k (x - x_ref)."""

    k: tuple[float, ...]

    def __post_init__(self):
        object.__setattr__(self, "k", tuple(float(v) for v in self.k))
        if not all(np.isfinite(self.k)):
            raise ValueError("gain entries must be finite")


def _expm_taylor(m: np.ndarray) -> np.ndarray:
    """Scaled-and-squared Taylor series for expm, truncated at machine precision."""
    norm = float(np.max(np.abs(m))) if m.size else 0.0
    squarings = max(0, int(np.ceil(np.log2(norm / 0.5))) if norm > 0.5 else 0)
    ms = m / (2.0 ** squarings)
    n = m.shape[0]
    result = np.eye(n)
    term = np.eye(n)
    for k in range(1, 40):
        term = term @ ms / k
        result = result + term
        if float(np.max(np.abs(term))) <= 1e-16 * max(1.0, float(np.max(np.abs(result)))):
            break
    for _ in range(squarings):
        result = result @ result
    return result


def discretize(model: LinearModel, t_ctr: float) -> DiscreteModel:
    """Exact zero-order-hold discretization via the augmented matrix exponential.

    exp([[a, b], [0, 0]] * t) = [[ad, bd], [0, I]], so ad = exp(a t) and
    bd = (integral of exp(a tau) d tau) b in one series evaluation.
    """
    if not t_ctr > 0:
        raise ValueError("t_ctr must be > 0")
    a = model.a
    b = model.b
    n, m = a.shape[0], b.shape[1]
    aug = np.zeros((n + m, n + m))
    aug[:n, :n] = a
    aug[:n, n:] = b
    e = _expm_taylor(aug * t_ctr)
    if not np.all(np.isfinite(e)):
        raise DiscretizationError(f"matrix exponential diverged at t_ctr={t_ctr}")
    return DiscreteModel(e[:n, :n], e[:n, n:], t_ctr)


def spectral_radius(m: np.ndarray) -> float:
    """Largest eigenvalue magnitude of a square matrix."""
    m = np.asarray(m, dtype=float)
    if not np.all(np.isfinite(m)):
        raise ValueError("matrix entries must be finite")
    return float(np.max(np.abs(np.linalg.eigvals(m))))


def lqr_gain(
    model: DiscreteModel,
    weights: LqrWeights,
    tol: float = 1e-10,
    max_iter: int = 10**6,
) -> Gain:
    """Infinite-horizon LQR gain by value iteration on the Riccati recursion.

    P[k+1] = Q + ad' P ad - ad' P bd (R + bd' P bd)^-1 bd' P ad, P[0] = Q,
    iterated until max|P[k+1] - P[k]| < tol. The returned closed loop is
    verified to satisfy rho(ad - bd k) < 1.
    """
    if not tol > 0:
        raise ValueError("tol must be > 0")
    ad, bd = model.ad, model.bd
    n = ad.shape[0]
    if len(weights.state_weights) != n:
        raise ValueError(f"need {n} state weights, got {len(weights.state_weights)}")
    q = np.diag(weights.state_weights)
    r = np.array([[weights.control_weight]])
    p = q.copy()
    for _ in range(max_iter):
        btp = bd.T @ p
        gram = r + btp @ bd
        k = np.linalg.solve(gram, btp @ ad)
        p_next = q + ad.T @ p @ ad - (ad.T @ p @ bd) @ k
        if not np.all(np.isfinite(p_next)) or float(np.max(np.abs(p_next))) > 1e100:
            raise RiccatiConvergenceError("Riccati iteration diverged")
        delta = float(np.max(np.abs(p_next - p)))
        p = p_next
        if delta < tol:
            break
    else:
        raise RiccatiConvergenceError(f"no convergence within {max_iter} iterations")
    btp = bd.T @ p
    k = np.linalg.solve(r + btp @ bd, btp @ ad)
    gain = Gain(tuple(k.ravel()))
    rho = spectral_radius(ad - bd @ k)
    if not rho < 1.0:
        raise UnstableDesignError(f"closed-loop spectral radius {rho:.6g} >= 1")
    return gain


def riccati_residual(model: DiscreteModel, weights: LqrWeights, p: np.ndarray) -> float:
    """Max-abs residual of p against the fixed-point Riccati equation."""
    ad, bd = model.ad, model.bd
    q = np.diag(weights.state_weights)
    r = np.array([[weights.control_weight]])
    btp = bd.T @ p
    k = np.linalg.solve(r + btp @ bd, btp @ ad)
    return float(np.max(np.abs(p - (q + ad.T @ p @ ad - (ad.T @ p @ bd) @ k))))


def riccati_solution(
    model: DiscreteModel,
    weights: LqrWeights,
    tol: float = 1e-10,
    max_iter: int = 10**6,
) -> np.ndarray:
    """The converged Riccati matrix P from the same value iteration as lqr_gain."""
    ad, bd = model.ad, model.bd
    q = np.diag(weights.state_weights)
    r = np.array([[weights.control_weight]])
    p = q.copy()
    for _ in range(max_iter):
        btp = bd.T @ p
        k = np.linalg.solve(r + btp @ bd, btp @ ad)
        p_next = q + ad.T @ p @ ad - (ad.T @ p @ bd) @ k
        if not np.all(np.isfinite(p_next)) or float(np.max(np.abs(p_next))) > 1e100:
            raise RiccatiConvergenceError("Riccati iteration diverged")
        delta = float(np.max(np.abs(p_next - p)))
        p = p_next
        if delta < tol:
            return p
    raise RiccatiConvergenceError(f"no convergence within {max_iter} iterations")


def _control(k, q, theta, q_dot, theta_dot, r, force_limit):
    u = -(k[0] * (q - r) + k[1] * theta + k[2] * q_dot + k[3] * theta_dot)
    if force_limit is not None:
        if u > force_limit:
            return force_limit
        if u < -force_limit:
            return -force_limit
    return u


def control_force(
    gain: Gain,
    state_estimate: PlantState,
    r: float,
    force_limit: float | None = None,
) -> float:
    """u = -k (x - x_ref) with x_ref = [r, 0, 0, 0], clamped to the force limit."""
    return _control(
        gain.k,
        state_estimate.q,
        state_estimate.theta,
        state_estimate.q_dot,
        state_estimate.theta_dot,
        r,
        force_limit,
    )


def design_gain(model: LinearModel, t_ctr: float, weights: LqrWeights) -> Gain:
    """Discretize at t_ctr and solve for the LQR gain in one call."""
    return lqr_gain(discretize(model, t_ctr), weights)
