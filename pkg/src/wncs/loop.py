"""Closed-loop episode simulation over lossy uplink/downlink frames.

Timing model: the sensor samples every t_ctr seconds and each radio frame
occupies one full control period in its direction. A sample taken at tick k
reaches the controller at tick k+1 unless its uplink frame is erased. The
force computed from it takes effect one period later (delay_periods = 2,
uplink then downlink) or immediately at the same boundary (delay_periods = 1,
both frames pipelined inside one period). The actuator therefore applies a
force that is delay_periods control periods older than the sample it came
from, and holds the previous force whenever a downlink frame is erased.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache

from .channel import ChannelParams, RngStream, per, sample_loss
from .control import Gain, LqrWeights, _control, design_gain
from .plant import (
    PlantParams,
    PlantState,
    ReferenceSignal,
    _span,
    linearize,
    reference,
)

FAIL_ANGLE = math.pi / 2.0

EVENT_CLASSES = {
    "sensor_noise": "value",
    "ul_loss": "transmission",
    "dl_loss": "transmission",
    "pendulum_fall": "system",
}


def classify_event(cause: str) -> str:
    """Map a concrete cause to its error class (value/transmission/system)."""
    try:
        return EVENT_CLASSES[cause]
    except KeyError:
        raise ValueError(f"unknown error cause: {cause!r}") from None


@dataclass(frozen=True)
class ErrorEvent:
    time: float
    category: str
    detail: str

    def __post_init__(self):
        if classify_event(self.detail) != self.category:
            raise ValueError(f"category {self.category!r} inconsistent with {self.detail!r}")


@dataclass(frozen=True)
class LoopConfig:
    """Everything one episode needs, including its RNG identity."""

    t_ctr: float = 0.01
    horizon: float = 600.0
    delay_periods: int = 2
    plant: PlantParams = field(default_factory=PlantParams)
    channel: ChannelParams = field(default_factory=ChannelParams)
    weights: LqrWeights = field(default_factory=LqrWeights)
    reference: ReferenceSignal = field(default_factory=ReferenceSignal)
    sensor_noise_std: tuple[float, float, float, float] = (0.0, 0.0, 0.0, 0.0)
    initial_state: PlantState = field(default_factory=lambda: PlantState(theta=0.01))
    seed: int = 0
    episode_index: int = 0
    per_override: float | None = None
    record_trajectory: bool = False

    def __post_init__(self):
        if not self.t_ctr > 0:
            raise ValueError("t_ctr must be > 0")
        if not self.horizon >= self.t_ctr:
            raise ValueError("horizon must be >= t_ctr")
        if self.delay_periods not in (1, 2):
            raise ValueError("delay_periods must be 1 or 2")
        object.__setattr__(self, "sensor_noise_std", tuple(float(s) for s in self.sensor_noise_std))
        if len(self.sensor_noise_std) != 4 or any(s < 0 for s in self.sensor_noise_std):
            raise ValueError("sensor_noise_std must be 4 nonnegative values")
        if self.seed < 0:
            raise ValueError("seed must be >= 0")
        if self.episode_index < 0:
            raise ValueError("episode_index must be >= 0")
        if self.per_override is not None and not 0.0 <= self.per_override <= 1.0:
            raise ValueError("per_override must be in [0, 1]")

    def ticks(self) -> int:
        """K = floor(horizon / t_ctr); samples run at ticks 0..K."""
        return int(self.horizon / self.t_ctr + 1e-9)

    def substeps(self) -> tuple[int, float]:
        """Integration substep count and size: dt = t_ctr/n <= min(1 ms, t_ctr/10)."""
        n = max(10, int(math.ceil(self.t_ctr / 1e-3 - 1e-9)))
        return n, self.t_ctr / n


@dataclass(frozen=True)
class EpisodeResult:
    cost: float
    per_theoretical: float
    per_empirical_ul: float
    per_empirical_dl: float
    aoi_mean: float
    aoi_max: float
    failed: bool
    time_to_failure: float | None
    event_counts: dict[str, int]
    diverged: bool
    theta_abs_max: float
    samples: list[tuple] | None = None


def _aoi_stats(delivery_log, horizon: float) -> tuple[float, float]:
    """Exact mean and max of the age sawtooth over [0, horizon].

    Age starts at 0 (the initial state is known at t=0 with generation time 0)
    and ramps linearly, dropping at each delivery to (delivery - generation).
    Deliveries carrying stale generations never increase freshness.
    """
    if not horizon > 0:
        raise ValueError("horizon must be > 0")
    gen = 0.0
    t_prev = 0.0
    area = 0.0
    peak = 0.0
    for g, d in delivery_log:
        if d <= t_prev:
            raise ValueError("delivery times must be strictly increasing and positive")
        if g > d:
            raise ValueError("generation time must not exceed delivery time")
        if d > horizon:
            raise ValueError("delivery beyond horizon")
        age_end = d - gen
        area += (d - t_prev) * ((t_prev - gen) + age_end) / 2.0
        peak = max(peak, age_end)
        gen = max(gen, g)
        t_prev = d
    age_end = horizon - gen
    area += (horizon - t_prev) * ((t_prev - gen) + age_end) / 2.0
    peak = max(peak, age_end)
    return area / horizon, peak


def aoi_time_average(delivery_log, horizon: float) -> float:
    """Time-averaged age of information for a (generation, delivery) log."""
    return _aoi_stats(delivery_log, horizon)[0]


@lru_cache(maxsize=512)
def design_for(plant: PlantParams, t_ctr: float, weights: LqrWeights) -> Gain:
    """LQR design for a plant at one control interval, memoized across episodes."""
    return design_gain(linearize(plant), t_ctr, weights)


def run_episode(config: LoopConfig) -> EpisodeResult:
    """Simulate one episode and return its metrics.

    The quadratic cost averages 0.5 theta^2 + 0.5 (q - r)^2 over the K+1
    sensor ticks. A fall (|theta| > pi/2) marks the episode failed but the
    simulation continues to the horizon so costs stay comparable. If the
    state ever turns non-finite the episode stops early and the cost covers
    the finite prefix only, flagged by `diverged`.
    """
    gain = design_for(config.plant, config.t_ctr, config.weights)
    k_gain = gain.k
    eps = config.per_override if config.per_override is not None else per(config.channel, config.t_ctr)

    rng_ul = RngStream(config.seed, config.episode_index, 0)
    rng_dl = RngStream(config.seed, config.episode_index, 1)
    noisy = any(s > 0 for s in config.sensor_noise_std)
    rng_noise = RngStream(config.seed, config.episode_index, 2) if noisy else None

    p = config.plant
    mc, mp, pl = p.cart_mass, p.pole_mass, p.pole_length
    fr, grav = p.cart_friction, p.gravity
    force_limit = p.force_limit
    delay = config.delay_periods
    t_ctr = config.t_ctr
    n_ticks = config.ticks()
    n_sub, dt = config.substeps()

    q, th, qd, thd = config.initial_state.as_tuple()
    ctrl_q, ctrl_th, ctrl_qd, ctrl_thd = q, th, qd, thd
    ctrl_gen = 0.0
    u = 0.0
    dl_pending = None
    sample_prev = None

    cost_sum = 0.0
    ul_sent = ul_lost = dl_sent = dl_lost = 0
    noise_events = 0
    deliveries: list[tuple[float, float]] = []
    failed = False
    diverged = False
    t_fail: float | None = None
    theta_abs_max = abs(th)
    trajectory: list[tuple] | None = [] if config.record_trajectory else None

    for k in range(n_ticks + 1):
        t = k * t_ctr
        r = reference(config.reference, t)
        cost_sum += 0.5 * th * th + 0.5 * (q - r) * (q - r)

        tick_ul_lost = 0
        tick_dl_lost = 0
        if k >= 1:
            ul_sent += 1
            if sample_loss(eps, rng_ul):
                ul_lost += 1
                tick_ul_lost = 1
            else:
                ctrl_q, ctrl_th, ctrl_qd, ctrl_thd = sample_prev
                ctrl_gen = t - t_ctr
                deliveries.append((ctrl_gen, t))
            if delay == 2 and dl_pending is not None:
                force_new, was_lost = dl_pending
                if not was_lost:
                    u = force_new
                dl_pending = None

        if k < n_ticks:
            if k >= 1:
                force = _control(k_gain, ctrl_q, ctrl_th, ctrl_qd, ctrl_thd, r, force_limit)
                dl_sent += 1
                lost = sample_loss(eps, rng_dl)
                if lost:
                    dl_lost += 1
                    tick_dl_lost = 1
                if delay == 1:
                    if not lost:
                        u = force
                else:
                    dl_pending = (force, lost)

            if noisy:
                noise = rng_noise.normal(4)
                std = config.sensor_noise_std
                sample_prev = (
                    q + std[0] * noise[0],
                    th + std[1] * noise[1],
                    qd + std[2] * noise[2],
                    thd + std[3] * noise[3],
                )
                noise_events += 1
            else:
                sample_prev = (q, th, qd, thd)

        if trajectory is not None:
            trajectory.append(
                (t, q, th, qd, thd, r, u, t - ctrl_gen, tick_ul_lost, tick_dl_lost)
            )

        if k == n_ticks:
            break

        q, th, qd, thd, fail_sub, span_max, div = _span(
            q, th, qd, thd, u, dt, n_sub, mc, mp, pl, fr, grav, FAIL_ANGLE
        )
        theta_abs_max = max(theta_abs_max, span_max)
        if fail_sub >= 0 and not failed:
            failed = True
            t_fail = t + (fail_sub + 1) * dt
        if div:
            diverged = True
            if not failed:
                failed = True
                t_fail = t
            break

    horizon_eff = n_ticks * t_ctr
    aoi_mean, aoi_max = _aoi_stats(deliveries, horizon_eff)
    counts = {
        "sensor_noise": noise_events,
        "ul_loss": ul_lost,
        "dl_loss": dl_lost,
        "pendulum_fall": 1 if failed else 0,
    }
    return EpisodeResult(
        cost=cost_sum / (n_ticks + 1),
        per_theoretical=eps,
        per_empirical_ul=ul_lost / ul_sent if ul_sent else 0.0,
        per_empirical_dl=dl_lost / dl_sent if dl_sent else 0.0,
        aoi_mean=aoi_mean,
        aoi_max=aoi_max,
        failed=failed,
        time_to_failure=t_fail,
        event_counts=counts,
        diverged=diverged,
        theta_abs_max=theta_abs_max,
        samples=trajectory,
    )
