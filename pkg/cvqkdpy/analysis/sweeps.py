"""
Parameter sweeps producing ordered, self-describing result sets.

Points are evaluated independently, optionally on a thread pool, and
collected in parameter order.
"""

import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Any, Callable, Dict, Iterable, List, Optional, Sequence, Tuple, TypeVar

from ..errors import ContractViolation
from ..protocols import KeyRateReport
from .limits import tolerable_excess_noise
from .optimize import Side
from .schemes import Evaluation, Experiment, Scheme

logger = logging.getLogger(__name__)

AXES = ("distance-km", "eps", "t_ps", "k")

T = TypeVar("T")
R = TypeVar("R")


@dataclass(frozen=True)
class SweepPoint:
    parameter: float
    report: KeyRateReport
    t_ps_alice: float = 1.0
    t_ps_bob: float = 1.0
    t_ps_used: float = 1.0
    eps_tolerable: Optional[float] = None
    in_range: bool = True

    @classmethod
    def from_evaluation(cls, parameter: float, evaluation: Evaluation, **extra) -> "SweepPoint":
        return cls(
            parameter=float(parameter),
            report=evaluation.report,
            t_ps_alice=evaluation.t_ps_alice,
            t_ps_bob=evaluation.t_ps_bob,
            t_ps_used=evaluation.t_ps_used,
            **extra,
        )


@dataclass(frozen=True)
class SweepResult:
    """
    One curve: a named axis, points in ascending parameter order and the
    metadata needed to recompute any point.
    """

    axis: str
    curve: str
    points: Tuple[SweepPoint, ...]
    metadata: Dict[str, Any] = field(default_factory=dict)

    def __post_init__(self):
        if self.axis not in AXES:
            raise ContractViolation(f"axis must be one of {AXES}, got {self.axis!r}")
        object.__setattr__(self, "points", tuple(self.points))
        params = [p.parameter for p in self.points]
        if any(b < a for a, b in zip(params, params[1:])):
            raise ContractViolation(f"sweep points of {self.curve!r} are not in ascending order")

    @property
    def parameters(self) -> List[float]:
        return [p.parameter for p in self.points]

    @property
    def rates(self) -> List[float]:
        return [p.report.k_ps for p in self.points]


def _parallel_map(fn: Callable[[T], R], items: Sequence[T], threads: Optional[int]) -> List[R]:
    if threads and threads > 1 and len(items) > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            return list(pool.map(fn, items))
    return [fn(item) for item in items]


def _grid(values: Iterable[float], name: str) -> List[float]:
    grid = sorted(float(v) for v in values)
    if not grid:
        raise ContractViolation(f"{name} grid is empty")
    return grid


def _metadata(experiment: Experiment, scheme: Scheme, axis: str, **fixed) -> Dict[str, Any]:
    meta = experiment.snapshot()
    meta.update(
        {
            "axis": axis,
            "scheme": scheme.name,
            "k_alice": scheme.k_alice,
            "k_bob": scheme.k_bob,
            "t_ps_alice": scheme.t_ps_alice,
            "t_ps_bob": scheme.t_ps_bob,
        }
    )
    meta.update(fixed)
    return meta


def sweep_distance(
    experiment: Experiment, scheme: Scheme, distances: Iterable[float], threads: Optional[int] = None
) -> SweepResult:
    grid = _grid(distances, "distance")
    logger.info("sweeping %s over %d distances", scheme.name, len(grid))
    points = _parallel_map(lambda d: SweepPoint.from_evaluation(d, experiment.evaluate(scheme, d)), grid, threads)
    return SweepResult("distance-km", scheme.name, tuple(points), _metadata(experiment, scheme, "distance-km"))


def sweep_eps(
    experiment: Experiment,
    scheme: Scheme,
    eps_values: Iterable[float],
    distance_km: float,
    threads: Optional[int] = None,
) -> SweepResult:
    grid = _grid(eps_values, "eps")
    logger.info("sweeping %s over %d noise values at %g km", scheme.name, len(grid), distance_km)
    points = _parallel_map(
        lambda e: SweepPoint.from_evaluation(e, experiment.evaluate(scheme, distance_km, e)), grid, threads
    )
    meta = _metadata(experiment, scheme, "eps", distance_km=distance_km)
    return SweepResult("eps", scheme.name, tuple(points), meta)


def sweep_t_ps(
    experiment: Experiment,
    scheme: Scheme,
    t_ps_values: Iterable[float],
    distance_km: float = 0.0,
    threads: Optional[int] = None,
) -> SweepResult:
    """Rate and success probability at fixed T_PS values on the subtracting side(s)"""
    if scheme.side is Side.NONE:
        raise ContractViolation(f"scheme {scheme.name!r} has no subtraction to sweep")
    grid = _grid(t_ps_values, "t_ps")

    def point(t: float) -> SweepPoint:
        pinned = scheme.with_t_ps(t if scheme.k_alice else None, t if scheme.k_bob else None)
        return SweepPoint.from_evaluation(t, experiment.evaluate(pinned, distance_km))

    logger.info("sweeping %s over %d T_PS values", scheme.name, len(grid))
    points = _parallel_map(point, grid, threads)
    meta = _metadata(experiment, scheme, "t_ps", distance_km=distance_km)
    return SweepResult("t_ps", scheme.name, tuple(points), meta)


def sweep_photons(
    experiment: Experiment,
    side: Side,
    photon_counts: Iterable[int],
    distance_km: float,
    threads: Optional[int] = None,
) -> SweepResult:
    """Optimised rate versus the number of subtracted photons on ``side``"""
    counts = sorted(int(k) for k in photon_counts)
    if not counts:
        raise ContractViolation("photon count grid is empty")

    def point(k: int) -> SweepPoint:
        return SweepPoint.from_evaluation(k, experiment.evaluate(Scheme.for_side(side, k), distance_km))

    points = _parallel_map(point, counts, threads)
    scheme = Scheme.for_side(side, 1)
    meta = _metadata(experiment, scheme, "k", distance_km=distance_km, side=Side(side).value)
    return SweepResult("k", f"{Side(side).value}-k", tuple(points), meta)


def sweep_noise(
    experiment: Experiment,
    scheme: Scheme,
    distances: Iterable[float],
    tol: float = 1e-5,
    optimize: bool = True,
    threads: Optional[int] = None,
) -> SweepResult:
    """Tolerable excess noise versus distance; the report is taken at the tolerable noise"""
    grid = _grid(distances, "distance")

    def point(d: float) -> SweepPoint:
        limit = tolerable_excess_noise(experiment, scheme, d, tol, optimize)
        pinned = scheme.with_t_ps(
            limit.t_ps_alice if scheme.k_alice else None,
            limit.t_ps_bob if scheme.k_bob else None,
        )
        evaluation = experiment.evaluate(pinned, d, limit.eps)
        return SweepPoint.from_evaluation(d, evaluation, eps_tolerable=limit.eps, in_range=limit.in_range)

    logger.info("tolerable noise of %s over %d distances", scheme.name, len(grid))
    points = _parallel_map(point, grid, threads)
    meta = _metadata(experiment, scheme, "distance-km", quantity="eps_tolerable", tol=tol, optimize=optimize)
    return SweepResult("distance-km", scheme.name, tuple(points), meta)


def compare_schemes(
    experiment: Experiment, distances: Iterable[float], k: int = 1, threads: Optional[int] = None
) -> Dict[str, SweepResult]:
    """Rate versus distance without subtraction and with k-photon subtraction at Alice, Bob and both"""
    return {
        side.value: sweep_distance(experiment, Scheme.for_side(side, k), distances, threads)
        for side in (Side.NONE, Side.ALICE, Side.BOB, Side.BOTH)
    }
