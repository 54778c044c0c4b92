"""Command-line front end: config parsing, experiment commands, CSV/SVG output."""

from __future__ import annotations

import argparse
import os
import sys
from dataclasses import dataclass

from . import __version__
from .campaign import feasible_region, find_optimum, run_sweep
from .channel import BlocklengthError, ChannelParams, blocklength, per, snr_db_to_linear
from .control import LqrWeights
from .loop import LoopConfig, run_episode
from .plant import PlantParams, PlantState, ReferenceSignal
from .svgplot import emit_svg


class ConfigError(ValueError):
    """Configuration document or flag rejected, with the offending key named."""


DEFAULT_GRID = (0.005, 0.0055, 0.006, 0.007, 0.008, 0.009, 0.010, 0.015, 0.030, 0.045)
DEFAULT_LEVELS = (0.0, 0.25, 0.5, 0.75, 0.9, 1.0)

# key -> (parser, default). Parsed in this order; the order also fixes the
# output header echo.
_FLOAT = float
_INT = int


def _parse_bool(text: str) -> bool:
    low = text.strip().lower()
    if low in ("1", "true", "yes", "on"):
        return True
    if low in ("0", "false", "no", "off"):
        return False
    raise ValueError(f"not a boolean: {text!r}")


def _parse_floats(text: str) -> tuple[float, ...]:
    items = [s.strip() for s in text.split(",") if s.strip()]
    return tuple(float(s) for s in items)


def _parse_optional_float(text: str):
    if text.strip().lower() in ("", "none"):
        return None
    return float(text)


CONFIG_KEYS = {
    "t_ctr": (_FLOAT, 0.01),
    "horizon": (_FLOAT, 600.0),
    "delay_periods": (_INT, 2),
    "seed": (_INT, 0),
    "episode_index": (_INT, 0),
    "episodes": (_INT, 20),
    "grid": (_parse_floats, DEFAULT_GRID),
    "snr_db": (_FLOAT, 0.0),
    "bandwidth": (_FLOAT, 1000.0),
    "symbol_rate": (_FLOAT, 10000.0),
    "payload_bits": (_INT, 64),
    "cart_mass": (_FLOAT, 0.5),
    "pole_mass": (_FLOAT, 0.2),
    "pole_length": (_FLOAT, 0.3),
    "gravity": (_FLOAT, 9.81),
    "cart_friction": (_FLOAT, 0.1),
    "force_limit": (_parse_optional_float, 20.0),
    "state_weights": (_parse_floats, (0.5, 0.5, 0.0, 0.0)),
    "control_weight": (_FLOAT, 3.0),
    "ref_period": (_FLOAT, 20.0),
    "ref_duty": (_FLOAT, 0.4),
    "ref_low": (_FLOAT, 0.0),
    "ref_high": (_FLOAT, 5.0),
    "sensor_noise_std": (_parse_floats, (0.0, 0.0, 0.0, 0.0)),
    "initial_state": (_parse_floats, (0.0, 0.01, 0.0, 0.0)),
    "per_override": (_parse_optional_float, None),
    "reliability_levels": (_parse_floats, DEFAULT_LEVELS),
}


@dataclass(frozen=True)
class RunConfig:
    """Fully resolved configuration for one command invocation."""

    loop: LoopConfig
    grid: tuple[float, ...]
    episodes: int
    workers: int
    reliability_levels: tuple[float, ...]
    snr_db: float
    svg: bool
    values: dict


def _parse_document(text: str) -> dict:
    values = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}: expected key = value, got {raw.strip()!r}")
        key, _, val = line.partition("=")
        key = key.strip()
        if key not in CONFIG_KEYS:
            raise ConfigError(f"line {lineno}: unknown key {key!r}")
        parser, _ = CONFIG_KEYS[key]
        try:
            values[key] = parser(val.strip())
        except ValueError as exc:
            raise ConfigError(f"key {key!r}: {exc}") from None
    return values


def parse_config(text: str, overrides: dict | None = None) -> RunConfig:
    """Build a validated RunConfig from a key = value document plus overrides."""
    values = {key: default for key, (_, default) in CONFIG_KEYS.items()}
    values.update(_parse_document(text))
    workers = int(os.environ.get("WNCS_WORKERS", "1"))
    svg = False
    for key, val in (overrides or {}).items():
        if key == "workers":
            workers = int(val)
        elif key == "svg":
            svg = bool(val)
        elif key == "ideal_channel":
            if val:
                values["per_override"] = 0.0
        elif key == "paper_scale":
            if val:
                values["horizon"] = 6000.0
                values["episodes"] = 50
        elif key in CONFIG_KEYS:
            values[key] = val
        else:
            raise ConfigError(f"unknown override {key!r}")

    def build(factory, key_hint, *args, **kwargs):
        try:
            return factory(*args, **kwargs)
        except ValueError as exc:
            raise ConfigError(f"{key_hint}: {exc}") from None

    plant = build(
        PlantParams,
        "plant parameters",
        cart_mass=values["cart_mass"],
        pole_mass=values["pole_mass"],
        pole_length=values["pole_length"],
        gravity=values["gravity"],
        cart_friction=values["cart_friction"],
        force_limit=values["force_limit"],
    )
    snr_linear = snr_db_to_linear(values["snr_db"])
    channel = build(
        ChannelParams,
        "channel parameters",
        bandwidth=values["bandwidth"],
        symbol_rate=values["symbol_rate"],
        snr=snr_linear,
        payload_bits=values["payload_bits"],
    )
    if len(values["state_weights"]) != 4:
        raise ConfigError("state_weights: need exactly 4 values")
    weights = build(
        LqrWeights,
        "state_weights/control_weight",
        state_weights=values["state_weights"],
        control_weight=values["control_weight"],
    )
    ref = build(
        ReferenceSignal,
        "ref_period/ref_duty",
        period=values["ref_period"],
        duty=values["ref_duty"],
        low=values["ref_low"],
        high=values["ref_high"],
    )
    if len(values["initial_state"]) != 4:
        raise ConfigError("initial_state: need exactly 4 values")
    initial = build(PlantState, "initial_state", *values["initial_state"])
    loop = build(
        LoopConfig,
        "loop configuration",
        t_ctr=values["t_ctr"],
        horizon=values["horizon"],
        delay_periods=values["delay_periods"],
        plant=plant,
        channel=channel,
        weights=weights,
        reference=ref,
        sensor_noise_std=values["sensor_noise_std"],
        initial_state=initial,
        seed=values["seed"],
        episode_index=values["episode_index"],
        per_override=values["per_override"],
    )
    grid = values["grid"]
    if not grid:
        raise ConfigError("grid: must be nonempty")
    if any(b <= a for a, b in zip(grid, grid[1:])):
        raise ConfigError("grid: must be strictly increasing")
    levels = values["reliability_levels"]
    if any(not 0.0 <= lv <= 1.0 for lv in levels):
        raise ConfigError("reliability_levels: values must lie in [0, 1]")
    if values["episodes"] < 1:
        raise ConfigError("episodes: must be >= 1")
    if workers < 1:
        raise ConfigError("workers: must be >= 1")
    return RunConfig(
        loop=loop,
        grid=grid,
        episodes=values["episodes"],
        workers=workers,
        reliability_levels=levels,
        snr_db=values["snr_db"],
        svg=svg,
        values=values,
    )


def _g(x) -> str:
    if x is None:
        return ""
    return f"{x:.17g}" if isinstance(x, float) else str(x)


def _header(config: RunConfig) -> list[str]:
    lines = [f"# wncs {__version__}"]
    for key in CONFIG_KEYS:
        val = config.values[key]
        if isinstance(val, tuple):
            text = ",".join(_g(v) for v in val)
        else:
            text = _g(val)
        lines.append(f"# {key} = {text}")
    return lines


def _write(path: str | None, text: str) -> None:
    if path is None:
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)


def cmd_per_curve(config: RunConfig, out: str | None) -> None:
    lines = _header(config)
    lines.append("t_ctr,blocklength,epsilon,flag")
    for t_ctr in config.grid:
        n = blocklength(config.loop.channel, t_ctr)
        try:
            eps = per(config.loop.channel, t_ctr)
            lines.append(f"{_g(t_ctr)},{_g(n)},{_g(eps)},")
        except BlocklengthError:
            lines.append(f"{_g(t_ctr)},{_g(n)},,blocklength_too_short")
    _write(out, "\n".join(lines) + "\n")


def cmd_episode(config: RunConfig, out: str | None) -> None:
    from dataclasses import replace

    result = run_episode(replace(config.loop, record_trajectory=True))
    lines = _header(config)
    lines.append(f"# cost = {_g(result.cost)}")
    lines.append(f"# per_theoretical = {_g(result.per_theoretical)}")
    lines.append(f"# per_empirical_ul = {_g(result.per_empirical_ul)}")
    lines.append(f"# per_empirical_dl = {_g(result.per_empirical_dl)}")
    lines.append(f"# aoi_mean = {_g(result.aoi_mean)}")
    lines.append(f"# aoi_max = {_g(result.aoi_max)}")
    lines.append(f"# failed = {int(result.failed)}")
    lines.append(f"# time_to_failure = {_g(result.time_to_failure)}")
    lines.append(f"# diverged = {int(result.diverged)}")
    lines.append(f"# theta_abs_max = {_g(result.theta_abs_max)}")
    for detail, count in sorted(result.event_counts.items()):
        lines.append(f"# events_{detail} = {count}")
    lines.append("t,q,theta,q_dot,theta_dot,r,u,aoi,ul_lost,dl_lost")
    for row in result.samples:
        t, q, th, qd, thd, r, u, aoi, ull, dll = row
        lines.append(
            f"{_g(t)},{_g(q)},{_g(th)},{_g(qd)},{_g(thd)},{_g(r)},{_g(u)},{_g(aoi)},{ull},{dll}"
        )
    _write(out, "\n".join(lines) + "\n")


def _sweep_records(config: RunConfig):
    return run_sweep(config.loop, list(config.grid), config.episodes, config.workers)


def cmd_sweep(config: RunConfig, out: str | None) -> None:
    records = _sweep_records(config)
    optimum = find_optimum(records)
    lines = _header(config)
    lines.append("t_ctr,episodes,cost_mean,cost_stderr,per_theoretical,aoi_mean,reliability,mttf_mean,infeasible,optimum")
    for rec in records:
        lines.append(
            ",".join(
                (
                    _g(rec.t_ctr),
                    str(rec.episodes),
                    _g(rec.cost_mean),
                    _g(rec.cost_stderr),
                    _g(rec.per_theoretical),
                    _g(rec.aoi_mean),
                    _g(rec.reliability),
                    _g(rec.mttf_mean),
                    str(int(rec.infeasible)),
                    str(int(rec.t_ctr == optimum)),
                )
            )
        )
    _write(out, "\n".join(lines) + "\n")
    if config.svg:
        feasible = [r for r in records if not r.infeasible]
        svg = emit_svg(
            [("cost_mean", [r.t_ctr * 1e3 for r in feasible], [r.cost_mean for r in feasible])],
            "control interval (ms)",
            "control cost",
            "Control cost vs control interval",
        )
        svg_path = (out or "sweep") + ".svg"
        _write(svg_path, svg)


def cmd_feasible(config: RunConfig, out: str | None) -> None:
    records = _sweep_records(config)
    lines = _header(config)
    lines.append("min_reliability,t_ctr,aoi_mean,cost_mean,reliability")
    for level in config.reliability_levels:
        for pt in feasible_region(records, level):
            lines.append(
                f"{_g(level)},{_g(pt.source_t_ctr)},{_g(pt.aoi)},{_g(pt.error)},{_g(pt.reliability)}"
            )
    _write(out, "\n".join(lines) + "\n")


def _build_argparser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="wncs",
        description="Inverted pendulum over lossy finite-blocklength wireless links",
    )
    parser.add_argument("command", choices=["per-curve", "episode", "sweep", "feasible"])
    parser.add_argument("--config", help="path to a key = value configuration document")
    parser.add_argument("--out", help="output file (default: stdout)")
    parser.add_argument("--seed", type=int, help="master seed override")
    parser.add_argument("--episodes", type=int, help="episodes per grid point override")
    parser.add_argument("--workers", type=int, help="worker process count")
    parser.add_argument(
        "--ideal-channel", action="store_true", help="disable frame losses (per = 0)"
    )
    parser.add_argument(
        "--paper-scale", action="store_true",
        help="full-scale campaign: 6000 s horizon, 50 episodes per point",
    )
    parser.add_argument("--svg", action="store_true", help="also emit an SVG plot (sweep)")
    return parser


def main(argv: list[str] | None = None) -> int:
    args = _build_argparser().parse_args(argv)
    try:
        text = ""
        if args.config:
            with open(args.config, "r", encoding="utf-8") as fh:
                text = fh.read()
        overrides: dict = {}
        if args.seed is not None:
            overrides["seed"] = args.seed
        if args.episodes is not None:
            overrides["episodes"] = args.episodes
        if args.workers is not None:
            overrides["workers"] = args.workers
        if args.ideal_channel:
            overrides["ideal_channel"] = True
        if args.paper_scale:
            overrides["paper_scale"] = True
        if args.svg:
            overrides["svg"] = True
        config = parse_config(text, overrides)
        command = {
            "per-curve": cmd_per_curve,
            "episode": cmd_episode,
            "sweep": cmd_sweep,
            "feasible": cmd_feasible,
        }[args.command]
        command(config, args.out)
    except (ConfigError, OSError, ValueError, RuntimeError) as exc:
        print(f"wncs: error: {exc}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
