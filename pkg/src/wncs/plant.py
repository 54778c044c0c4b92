"""Nonlinear cart-pole dynamics, RK4 integration, reference signal, linearization."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

try:
    from numba import njit

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover - exercised only without numba
    HAVE_NUMBA = False

    def njit(*args, **kwargs):
        if args and callable(args[0]):
            return args[0]

        def deco(fn):
            return fn

        return deco


class IntegrationDivergedError(RuntimeError):
    """Raised when a single integration step produces a non-finite state."""


@dataclass(frozen=True)
class PlantParams:
    """Physical constants of the point-mass cart-pole."""

    cart_mass: float = 0.5
    pole_mass: float = 0.2
    pole_length: float = 0.3
    gravity: float = 9.81
    cart_friction: float = 0.1
    force_limit: float | None = 20.0

    def __post_init__(self):
        if not self.cart_mass > 0:
            raise ValueError("cart_mass must be > 0")
        if not self.pole_mass > 0:
            raise ValueError("pole_mass must be > 0")
        if not self.pole_length > 0:
            raise ValueError("pole_length must be > 0")
        if not self.gravity > 0:
            raise ValueError("gravity must be > 0")
        if self.cart_friction < 0:
            raise ValueError("cart_friction must be >= 0")
        if self.force_limit is not None and not self.force_limit > 0:
            raise ValueError("force_limit must be > 0 when set")


@dataclass(frozen=True)
class PlantState:
    """Cart position/velocity and pendulum angle/angular velocity.

    The angle is measured from the upright equilibrium and is not wrapped;
    it accumulates continuously so fall detection stays unambiguous.
    """

    q: float = 0.0
    theta: float = 0.0
    q_dot: float = 0.0
    theta_dot: float = 0.0

    def __post_init__(self):
        for name in ("q", "theta", "q_dot", "theta_dot"):
            if not math.isfinite(getattr(self, name)):
                raise ValueError(f"{name} must be finite")

    def as_tuple(self) -> tuple[float, float, float, float]:
        return (self.q, self.theta, self.q_dot, self.theta_dot)


@dataclass(frozen=True)
class ReferenceSignal:
    """Rectangular pulse for the cart position setpoint, high phase first."""

    period: float = 20.0
    duty: float = 0.4
    low: float = 0.0
    high: float = 5.0

    def __post_init__(self):
        if not self.period > 0:
            raise ValueError("period must be > 0")
        if not 0.0 <= self.duty <= 1.0:
            raise ValueError("duty must be in [0, 1]")


@dataclass(frozen=True)
class LinearModel:
    """Continuous-time linearization dx/dt = a x + b u about upright."""

    a: np.ndarray
    b: np.ndarray

    def __post_init__(self):
        a = np.asarray(self.a, dtype=float)
        b = np.asarray(self.b, dtype=float).reshape(-1, 1)
        if not (np.all(np.isfinite(a)) and np.all(np.isfinite(b))):
            raise ValueError("linear model entries must be finite")
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)


@njit(cache=True)
def _rates(q, th, qd, thd, force, mc, mp, pl, fr, grav):
    s = math.sin(th)
    c = math.cos(th)
    den = mc + mp * s * s
    qdd = (force - fr * qd + mp * pl * thd * thd * s - mp * grav * s * c) / den
    thdd = (grav * s - qdd * c) / pl
    return qd, thd, qdd, thdd


@njit(cache=True)
def _rk4(q, th, qd, thd, force, dt, mc, mp, pl, fr, grav):
    a1, b1, c1, d1 = _rates(q, th, qd, thd, force, mc, mp, pl, fr, grav)
    a2, b2, c2, d2 = _rates(
        q + 0.5 * dt * a1, th + 0.5 * dt * b1, qd + 0.5 * dt * c1, thd + 0.5 * dt * d1,
        force, mc, mp, pl, fr, grav,
    )
    a3, b3, c3, d3 = _rates(
        q + 0.5 * dt * a2, th + 0.5 * dt * b2, qd + 0.5 * dt * c2, thd + 0.5 * dt * d2,
        force, mc, mp, pl, fr, grav,
    )
    a4, b4, c4, d4 = _rates(
        q + dt * a3, th + dt * b3, qd + dt * c3, thd + dt * d3,
        force, mc, mp, pl, fr, grav,
    )
    h = dt / 6.0
    return (
        q + h * (a1 + 2.0 * a2 + 2.0 * a3 + a4),
        th + h * (b1 + 2.0 * b2 + 2.0 * b3 + b4),
        qd + h * (c1 + 2.0 * c2 + 2.0 * c3 + c4),
        thd + h * (d1 + 2.0 * d2 + 2.0 * d3 + d4),
    )


@njit(cache=True)
def _span(q, th, qd, thd, force, dt, n_sub, mc, mp, pl, fr, grav, fail_angle):
    """Integrate n_sub RK4 substeps under a held force.

    Returns (q, th, qd, thd, fail_substep, theta_abs_max, diverged) where
    fail_substep is the first substep index whose endpoint exceeded
    fail_angle in |theta| (-1 if none).
    """
    fail = -1
    th_max = 0.0
    for i in range(n_sub):
        q, th, qd, thd = _rk4(q, th, qd, thd, force, dt, mc, mp, pl, fr, grav)
        if not (
            math.isfinite(q)
            and math.isfinite(th)
            and math.isfinite(qd)
            and math.isfinite(thd)
        ):
            return q, th, qd, thd, fail, th_max, True
        a = abs(th)
        if a > th_max:
            th_max = a
        if fail < 0 and a > fail_angle:
            fail = i
    return q, th, qd, thd, fail, th_max, False


def derivative(state: PlantState, force: float, params: PlantParams):
    """Time derivative (q_dot, theta_dot, q_ddot, theta_ddot) of the cart-pole.

    q_ddot = (F - b q_dot + m l theta_dot^2 sin - m g sin cos) / (M + m sin^2)
    theta_ddot = (g sin - q_ddot cos) / l
    """
    return _rates(
        state.q, state.theta, state.q_dot, state.theta_dot, force,
        params.cart_mass, params.pole_mass, params.pole_length,
        params.cart_friction, params.gravity,
    )


def step(state: PlantState, force: float, dt: float, params: PlantParams) -> PlantState:
    """One classical RK4 step with the force held constant over dt."""
    if not dt > 0:
        raise ValueError("dt must be > 0")
    q, th, qd, thd = _rk4(
        state.q, state.theta, state.q_dot, state.theta_dot, force, dt,
        params.cart_mass, params.pole_mass, params.pole_length,
        params.cart_friction, params.gravity,
    )
    if not all(map(math.isfinite, (q, th, qd, thd))):
        raise IntegrationDivergedError(f"non-finite state after step of dt={dt}")
    return PlantState(q, th, qd, thd)


def reference(signal: ReferenceSignal, t: float) -> float:
    """Setpoint at time t: high while (t mod period) < duty*period, else low."""
    if t < 0:
        raise ValueError("t must be >= 0")
    return signal.high if (t % signal.period) < signal.duty * signal.period else signal.low


def linearize(params: PlantParams) -> LinearModel:
    """First-order expansion of the dynamics at the upright equilibrium."""
    mc, mp = params.cart_mass, params.pole_mass
    pl, fr, grav = params.pole_length, params.cart_friction, params.gravity
    a = np.array(
        [
            [0.0, 0.0, 1.0, 0.0],
            [0.0, 0.0, 0.0, 1.0],
            [0.0, -mp * grav / mc, -fr / mc, 0.0],
            [0.0, (mc + mp) * grav / (mc * pl), fr / (mc * pl), 0.0],
        ]
    )
    b = np.array([[0.0], [0.0], [1.0 / mc], [-1.0 / (mc * pl)]])
    return LinearModel(a, b)


def total_energy(state: PlantState, params: PlantParams) -> float:
    """Kinetic plus potential energy, with potential zero at upright."""
    mc, mp = params.cart_mass, params.pole_mass
    pl, grav = params.pole_length, params.gravity
    q_dot, th, th_dot = state.q_dot, state.theta, state.theta_dot
    vx = q_dot + pl * th_dot * math.cos(th)
    vy = pl * th_dot * math.sin(th)
    kinetic = 0.5 * mc * q_dot * q_dot + 0.5 * mp * (vx * vx + vy * vy)
    potential = mp * grav * pl * (math.cos(th) - 1.0)
    return kinetic + potential
