"""Monte-Carlo sweep over the control-interval grid and derived statistics."""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, replace

from .control import RiccatiConvergenceError, UnstableDesignError
from .loop import EpisodeResult, LoopConfig, design_for, run_episode


@dataclass(frozen=True)
class SweepRecord:
    """Aggregate of all episodes at one grid point."""

    t_ctr: float
    episodes: int
    cost_mean: float
    cost_stderr: float
    per_theoretical: float
    aoi_mean: float
    reliability: float
    mttf_mean: float | None
    infeasible: bool = False


@dataclass(frozen=True)
class PerformancePoint:
    """One achievable (AoI, error) combination and where it came from."""

    aoi: float
    error: float
    reliability: float
    source_t_ctr: float


def control_cost(samples) -> float:
    """Mean of 0.5 theta^2 + 0.5 (q - r)^2 over (q, theta, r) samples."""
    total = 0.0
    count = 0
    for q, theta, r in samples:
        total += 0.5 * theta * theta + 0.5 * (q - r) * (q - r)
        count += 1
    if count == 0:
        raise ValueError("samples must be nonempty")
    return total / count


def mttf_stats(results: list[EpisodeResult]) -> tuple[float, float | None]:
    """Failure fraction and mean time-to-failure over the failed episodes."""
    if not results:
        raise ValueError("results must be nonempty")
    times = [r.time_to_failure for r in results if r.failed]
    rate = len(times) / len(results)
    mean = sum(times) / len(times) if times else None
    return rate, mean


def _aggregate(t_ctr: float, results: list[EpisodeResult]) -> SweepRecord:
    n = len(results)
    costs = [r.cost for r in results]
    mean = sum(costs) / n
    if n > 1:
        var = sum((c - mean) ** 2 for c in costs) / (n - 1)
        stderr = math.sqrt(var / n)
    else:
        stderr = 0.0
    failure_rate, mttf_mean = mttf_stats(results)
    return SweepRecord(
        t_ctr=t_ctr,
        episodes=n,
        cost_mean=mean,
        cost_stderr=stderr,
        per_theoretical=results[0].per_theoretical,
        aoi_mean=sum(r.aoi_mean for r in results) / n,
        reliability=1.0 - failure_rate,
        mttf_mean=mttf_mean,
    )


def _infeasible(t_ctr: float, episodes: int) -> SweepRecord:
    return SweepRecord(
        t_ctr=t_ctr,
        episodes=episodes,
        cost_mean=math.nan,
        cost_stderr=math.nan,
        per_theoretical=math.nan,
        aoi_mean=math.nan,
        reliability=0.0,
        mttf_mean=None,
        infeasible=True,
    )


def run_sweep(
    base: LoopConfig,
    grid: list[float],
    episodes_per_point: int,
    workers: int = 1,
) -> list[SweepRecord]:
    """Run episodes_per_point episodes at every grid t_ctr and aggregate.

    Episode RNG streams depend only on (seed, episode_index, link), so the
    outcome is identical no matter how many workers execute the episodes.
    A grid point whose LQR design fails is flagged infeasible, not fatal.
    """
    if not grid:
        raise ValueError("grid must be nonempty")
    if any(b <= a for a, b in zip(grid, grid[1:])):
        raise ValueError("grid must be strictly increasing")
    if episodes_per_point < 1:
        raise ValueError("episodes_per_point must be >= 1")

    configs: list[LoopConfig] = []
    feasible: list[bool] = []
    for t_ctr in grid:
        point = replace(base, t_ctr=t_ctr, record_trajectory=False)
        try:
            design_for(point.plant, t_ctr, point.weights)
        except (RiccatiConvergenceError, UnstableDesignError):
            feasible.append(False)
            continue
        feasible.append(True)
        configs.extend(replace(point, episode_index=ep) for ep in range(episodes_per_point))

    if workers > 1 and len(configs) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            all_results = list(pool.map(run_episode, configs, chunksize=1))
    else:
        all_results = [run_episode(c) for c in configs]

    records = []
    cursor = 0
    for t_ctr, ok in zip(grid, feasible):
        if not ok:
            records.append(_infeasible(t_ctr, episodes_per_point))
            continue
        chunk = all_results[cursor : cursor + episodes_per_point]
        cursor += episodes_per_point
        records.append(_aggregate(t_ctr, chunk))
    return records


def find_optimum(records: list[SweepRecord]) -> float:
    """t_ctr of the smallest cost_mean, ties broken toward smaller t_ctr."""
    feasible = [r for r in records if not r.infeasible]
    if not feasible:
        raise ValueError("no feasible grid point")
    best = min(feasible, key=lambda r: (r.cost_mean, r.t_ctr))
    return best.t_ctr


def feasible_region(records: list[SweepRecord], min_reliability: float) -> list[PerformancePoint]:
    """Achievable (AoI, cost) points among records meeting the reliability floor."""
    if not 0.0 <= min_reliability <= 1.0:
        raise ValueError("min_reliability must be in [0, 1]")
    return [
        PerformancePoint(r.aoi_mean, r.cost_mean, r.reliability, r.t_ctr)
        for r in records
        if not r.infeasible and r.reliability >= min_reliability
    ]
