"""Operating limits of a scheme: tolerable excess noise and maximum distance."""

import logging
import warnings
from dataclasses import dataclass
from typing import Optional, Tuple

from ..errors import AccuracyWarning
from .schemes import Evaluation, Experiment, Scheme
from .search import bisect_boundary

logger = logging.getLogger(__name__)

RATE_CUTOFF = 1e-8
NOISE_START = 0.05
NOISE_CAP = 64.0
DISTANCE_START_KM = 50.0
DISTANCE_CAP_KM = 1000.0


@dataclass(frozen=True)
class NoiseTolerance:
    """
    Largest excess noise with a strictly positive rate.

    ``eps`` is the certified positive end of the final bracket. When the
    rate is not positive even without excess noise, ``in_range`` is false
    and ``eps`` is 0.
    """

    eps: float
    in_range: bool
    bracket: Tuple[float, float]
    distance_km: float
    t_ps_alice: float = 1.0
    t_ps_bob: float = 1.0


def _fixed_scheme(experiment: Experiment, scheme: Scheme, distance_km: float) -> Scheme:
    # hold T_PS at its optimum for the experiment's nominal noise
    if not scheme.optimizes:
        return scheme
    nominal = experiment.evaluate(scheme, distance_km)
    return scheme.with_t_ps(
        nominal.t_ps_alice if scheme.k_alice else None,
        nominal.t_ps_bob if scheme.k_bob else None,
    )


def tolerable_excess_noise(
    experiment: Experiment,
    scheme: Scheme,
    distance_km: float,
    tol: float = 1e-5,
    optimize: bool = True,
) -> NoiseTolerance:
    """
    Bisect for the excess noise (per channel) at which the rate stops being positive.

    With ``optimize`` the T_PS is re-optimised at every trial noise,
    otherwise it is held at its optimum for the experiment's own noise.
    """
    if not optimize:
        scheme = _fixed_scheme(experiment, scheme, distance_km)

    evaluations = {}

    def positive(eps: float) -> bool:
        evaluation = experiment.evaluate(scheme, distance_km, eps)
        evaluations[eps] = evaluation
        return evaluation.report.k_ps > 0.0

    if not positive(0.0):
        logger.debug("%s: no positive rate at %g km even without excess noise", scheme.name, distance_km)
        return NoiseTolerance(0.0, False, (0.0, 0.0), distance_km)

    good, bad = 0.0, NOISE_START
    while positive(bad):
        good = bad
        if bad >= NOISE_CAP:
            warnings.warn(
                f"{scheme.name}: rate still positive at eps={bad} ({distance_km} km); search capped",
                AccuracyWarning,
                stacklevel=2,
            )
            at_cap = evaluations[bad]
            return NoiseTolerance(bad, True, (bad, bad), distance_km, at_cap.t_ps_alice, at_cap.t_ps_bob)
        bad *= 2

    good, bad = bisect_boundary(positive, good, bad, tol)
    at_edge: Evaluation = evaluations[good]
    logger.debug("%s at %g km: tolerable eps in [%.6g, %.6g]", scheme.name, distance_km, good, bad)
    return NoiseTolerance(good, True, (good, bad), distance_km, at_edge.t_ps_alice, at_edge.t_ps_bob)


def max_distance(
    experiment: Experiment,
    scheme: Scheme,
    cutoff: float = RATE_CUTOFF,
    tol_km: float = 0.1,
    max_km: float = DISTANCE_CAP_KM,
    eps: Optional[float] = None,
) -> float:
    """
    Largest distance whose rate stays at or above ``cutoff``, to within ``tol_km``.

    Returns 0 when the rate at 0 km is already below the cutoff; the search
    stops at ``max_km`` with an :class:`AccuracyWarning`.
    """

    def above(distance_km: float) -> bool:
        return experiment.rate(scheme, distance_km, eps) >= cutoff

    if not above(0.0):
        return 0.0

    good, bad = 0.0, min(DISTANCE_START_KM, max_km)
    while above(bad):
        good = bad
        if bad >= max_km:
            warnings.warn(
                f"{scheme.name}: rate above {cutoff} at {max_km} km; distance search capped",
                AccuracyWarning,
                stacklevel=2,
            )
            return max_km
        bad = min(2 * bad, max_km)

    good, _ = bisect_boundary(above, good, bad, tol_km)
    logger.info("%s: maximum distance %.1f km (cutoff %g)", scheme.name, good, cutoff)
    return good
