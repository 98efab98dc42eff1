"""
Key-Rate Analysis
~~~~~~~~~~~~~~~~~

T_PS optimisation, distance and noise limits, parameter sweeps and the
scheme comparison.
"""

from .limits import RATE_CUTOFF, NoiseTolerance, max_distance, tolerable_excess_noise
from .optimize import Side, TpsOptimum, TpsSearch, maximize_rate, optimize_one_way_tps, optimize_tps
from .schemes import (
    DEFAULT_LOSS_DB_PER_KM,
    ONE_WAY,
    TWO_WAY,
    Evaluation,
    Experiment,
    Scheme,
    distance_to_channel,
)
from .search import bisect_boundary, golden_section_max
from .sweeps import (
    AXES,
    SweepPoint,
    SweepResult,
    compare_schemes,
    sweep_distance,
    sweep_eps,
    sweep_noise,
    sweep_photons,
    sweep_t_ps,
)

__all__ = [
    "RATE_CUTOFF",
    "NoiseTolerance",
    "max_distance",
    "tolerable_excess_noise",
    "Side",
    "TpsOptimum",
    "TpsSearch",
    "maximize_rate",
    "optimize_one_way_tps",
    "optimize_tps",
    "DEFAULT_LOSS_DB_PER_KM",
    "ONE_WAY",
    "TWO_WAY",
    "Evaluation",
    "Experiment",
    "Scheme",
    "distance_to_channel",
    "bisect_boundary",
    "golden_section_max",
    "AXES",
    "SweepPoint",
    "SweepResult",
    "compare_schemes",
    "sweep_distance",
    "sweep_eps",
    "sweep_noise",
    "sweep_photons",
    "sweep_t_ps",
]
