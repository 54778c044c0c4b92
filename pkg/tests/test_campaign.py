import math

import pytest

from wncs.campaign import (
    PerformancePoint,
    SweepRecord,
    control_cost,
    feasible_region,
    find_optimum,
    mttf_stats,
    run_sweep,
)
from wncs.loop import EpisodeResult, LoopConfig


def _record(t_ctr, cost, reliability=1.0, infeasible=False):
    return SweepRecord(
        t_ctr=t_ctr,
        episodes=4,
        cost_mean=cost,
        cost_stderr=0.0,
        per_theoretical=0.01,
        aoi_mean=1.5 * t_ctr,
        reliability=reliability,
        mttf_mean=None,
        infeasible=infeasible,
    )


def _result(failed=False, ttf=None, cost=1.0):
    return EpisodeResult(
        cost=cost,
        per_theoretical=0.0,
        per_empirical_ul=0.0,
        per_empirical_dl=0.0,
        aoi_mean=0.0,
        aoi_max=0.0,
        failed=failed,
        time_to_failure=ttf,
        event_counts={},
        diverged=False,
        theta_abs_max=0.0,
    )


def test_control_cost_reference_cases():
    assert control_cost([(1.0, 0.0, 1.0)]) == 0.0
    assert control_cost([(1.0, 1.0, 0.0)]) == pytest.approx(1.0, abs=1e-15)
    samples = [(0.2, 0.1, 0.0), (0.5, 0.0, 0.0), (0.0, -0.3, 0.0)]
    assert control_cost(samples) == pytest.approx(0.065, abs=1e-12)
    with pytest.raises(ValueError):
        control_cost([])


def test_mttf_stats_reference_cases():
    assert mttf_stats([_result(), _result()]) == (0.0, None)
    rate, mean = mttf_stats([_result(True, 10.0), _result(True, 30.0)])
    assert rate == 1.0 and mean == pytest.approx(20.0)
    rate, mean = mttf_stats([_result(True, 8.0), _result(), _result(), _result()])
    assert rate == 0.25 and mean == pytest.approx(8.0)
    with pytest.raises(ValueError):
        mttf_stats([])


def test_find_optimum_argmin_and_ties():
    recs = [_record(0.01, 3.0), _record(0.02, 1.0), _record(0.03, 2.0)]
    assert find_optimum(recs) == 0.02
    recs = [_record(0.01, 1.0), _record(0.02, 1.0)]
    assert find_optimum(recs) == 0.01
    with pytest.raises(ValueError):
        find_optimum([_record(0.01, 1.0, infeasible=True)])


def test_feasible_region_filtering_and_nesting():
    recs = [
        _record(0.01, 3.0, reliability=0.2),
        _record(0.02, 1.0, reliability=0.8),
        _record(0.03, 2.0, reliability=1.0),
    ]
    assert len(feasible_region(recs, 0.0)) == 3
    assert [p.source_t_ctr for p in feasible_region(recs, 1.0)] == [0.03]
    assert [p.source_t_ctr for p in feasible_region(recs, 0.5)] == [0.02, 0.03]
    levels = [0.0, 0.25, 0.5, 0.75, 0.9, 1.0]
    regions = [
        {(p.source_t_ctr, p.aoi, p.error) for p in feasible_region(recs, lv)} for lv in levels
    ]
    for smaller, larger in zip(regions[1:], regions[:-1]):
        assert smaller <= larger
    with pytest.raises(ValueError):
        feasible_region(recs, -0.1)


def test_feasible_region_empty_above_max_reliability():
    recs = [_record(0.01, 1.0, reliability=0.5)]
    assert feasible_region(recs, 0.6) == []


def test_run_sweep_validates_inputs():
    base = LoopConfig(horizon=1.0)
    with pytest.raises(ValueError):
        run_sweep(base, [], 1)
    with pytest.raises(ValueError):
        run_sweep(base, [0.02, 0.01], 1)
    with pytest.raises(ValueError):
        run_sweep(base, [0.01, 0.01], 1)
    with pytest.raises(ValueError):
        run_sweep(base, [0.01], 0)


def test_run_sweep_single_episode_stderr_zero():
    base = LoopConfig(horizon=5.0, seed=3)
    recs = run_sweep(base, [0.01], 1)
    assert recs[0].episodes == 1
    assert recs[0].cost_stderr == 0.0


def test_run_sweep_point_records_independent_of_grid_layout():
    base = LoopConfig(horizon=10.0, seed=9)
    a = run_sweep(base, [0.01, 0.02], 3)
    b = run_sweep(base, [0.008, 0.01], 3)
    assert a[0] == b[1]


def test_run_sweep_worker_count_does_not_change_records():
    base = LoopConfig(horizon=8.0, seed=21)
    grid = [0.008, 0.01]
    assert run_sweep(base, grid, 3, workers=1) == run_sweep(base, grid, 3, workers=3)


def test_run_sweep_flags_infeasible_design():
    # a 50 s interval makes the Riccati value iteration blow up, the rest survive
    base = LoopConfig(horizon=100.0, seed=2)
    recs = run_sweep(base, [0.01, 50.0], 1)
    assert not recs[0].infeasible
    assert recs[1].infeasible
    assert math.isnan(recs[1].cost_mean)
    assert find_optimum(recs) == 0.01


def test_run_sweep_aggregates_match_episode_metrics():
    base = LoopConfig(horizon=10.0, seed=5, per_override=0.0)
    recs = run_sweep(base, [0.01], 3)
    rec = recs[0]
    assert rec.reliability == 1.0
    assert rec.mttf_mean is None
    assert rec.cost_stderr == 0.0  # deterministic without losses
    assert rec.per_theoretical == 0.0
    assert rec.aoi_mean == pytest.approx(1.5 * 0.01, rel=0.02)


def test_performance_point_fields():
    p = PerformancePoint(aoi=0.01, error=2.0, reliability=0.9, source_t_ctr=0.005)
    assert p.aoi == 0.01 and p.error == 2.0


def test_control_cost_agrees_with_episode_accumulator():
    from wncs.loop import run_episode

    cfg = LoopConfig(t_ctr=0.01, horizon=10.0, per_override=0.3, seed=3, record_trajectory=True)
    res = run_episode(cfg)
    samples = [(row[1], row[2], row[5]) for row in res.samples]
    assert control_cost(samples) == pytest.approx(res.cost, rel=1e-12)
