"""Inverted pendulum over lossy finite-blocklength wireless links.

A deterministic, seedable co-simulation of a remotely controlled cart-pole,
plus a Monte-Carlo campaign engine for the control-cost-vs-control-interval
trade-off and reliability-constrained performance regions.
"""

__version__ = "0.1.0"

from .campaign import (
    PerformancePoint,
    SweepRecord,
    control_cost,
    feasible_region,
    find_optimum,
    mttf_stats,
    run_sweep,
)
from .channel import (
    BlocklengthError,
    ChannelParams,
    RngStream,
    capacity,
    dispersion,
    per,
    q_function,
    sample_loss,
    snr_db_to_linear,
)
from .control import (
    DiscreteModel,
    DiscretizationError,
    Gain,
    LqrWeights,
    RiccatiConvergenceError,
    UnstableDesignError,
    control_force,
    design_gain,
    discretize,
    lqr_gain,
    spectral_radius,
)
from .loop import (
    EpisodeResult,
    ErrorEvent,
    LoopConfig,
    aoi_time_average,
    classify_event,
    run_episode,
)
from .plant import (
    IntegrationDivergedError,
    LinearModel,
    PlantParams,
    PlantState,
    ReferenceSignal,
    derivative,
    linearize,
    reference,
    step,
    total_energy,
)
from .svgplot import emit_svg

__all__ = [
    "BlocklengthError",
    "ChannelParams",
    "DiscreteModel",
    "DiscretizationError",
    "EpisodeResult",
    "ErrorEvent",
    "Gain",
    "IntegrationDivergedError",
    "LinearModel",
    "LoopConfig",
    "LqrWeights",
    "PerformancePoint",
    "PlantParams",
    "PlantState",
    "ReferenceSignal",
    "RiccatiConvergenceError",
    "RngStream",
    "SweepRecord",
    "UnstableDesignError",
    "aoi_time_average",
    "capacity",
    "classify_event",
    "control_cost",
    "control_force",
    "derivative",
    "design_gain",
    "discretize",
    "dispersion",
    "emit_svg",
    "feasible_region",
    "find_optimum",
    "linearize",
    "lqr_gain",
    "mttf_stats",
    "per",
    "q_function",
    "reference",
    "run_episode",
    "run_sweep",
    "sample_loss",
    "snr_db_to_linear",
    "spectral_radius",
    "step",
    "total_energy",
]
