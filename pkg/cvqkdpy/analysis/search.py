"""One-dimensional search primitives: golden-section maximisation and predicate bisection."""

import logging
import math
from typing import Callable, Tuple

logger = logging.getLogger(__name__)

INV_PHI = (math.sqrt(5) - 1) / 2


def golden_section_max(f: Callable[[float], float], a: float, b: float, tol: float = 1e-4) -> Tuple[float, float]:
    """
    Golden-section search for the maximum of a unimodal ``f`` on [a, b].

    Returns the better of the two interior points once the bracket is
    narrower than ``tol``.
    """
    if tol <= 0:
        raise ValueError(f"tolerance must be positive, got {tol}")
    lo, hi = sorted((a, b))
    if hi - lo <= tol:
        mid = 0.5 * (lo + hi)
        return mid, f(mid)

    left, right = hi - INV_PHI * (hi - lo), lo + INV_PHI * (hi - lo)
    f_left, f_right = f(left), f(right)
    while hi - lo > tol:
        if f_left > f_right:
            # maximum lies in [lo, right]; the old left point becomes the new right one
            hi, right, f_right = right, left, f_left
            left = hi - INV_PHI * (hi - lo)
            f_left = f(left)
        else:
            lo, left, f_left = left, right, f_right
            right = lo + INV_PHI * (hi - lo)
            f_right = f(right)
    return (left, f_left) if f_left > f_right else (right, f_right)


def bisect_boundary(
    predicate: Callable[[float], bool], good: float, bad: float, tol: float
) -> Tuple[float, float]:
    """
    Shrink a bracket around the edge of the region where ``predicate`` holds.

    ``predicate(good)`` must be true and ``predicate(bad)`` false; both are
    checked. Returns the final (good, bad) pair with |bad - good| <= tol.
    """
    if tol <= 0:
        raise ValueError(f"tolerance must be positive, got {tol}")
    if not predicate(good):
        raise ValueError(f"bracket endpoint {good} does not satisfy the predicate")
    if predicate(bad):
        raise ValueError(f"bracket endpoint {bad} satisfies the predicate")
    while abs(bad - good) > tol:
        mid = (good + bad) / 2
        if predicate(mid):
            good = mid
        else:
            bad = mid
        logger.debug("bisection bracket [%.6g, %.6g]", good, bad)
    return good, bad
