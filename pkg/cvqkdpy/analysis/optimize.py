"""
Search for the subtraction transmittance T_PS that maximises the key rate.

A coarse grid locates the best cell, golden-section search refines it on
the neighbouring interval, and the better of the two is kept. Subtraction
on both sides is handled by alternating single-side searches.
"""

import logging
import math
from dataclasses import dataclass
from enum import Enum
from typing import Callable, Dict, Tuple

import numpy as np

from ..errors import ContractViolation
from ..protocols import ChannelSpec, KeyRateReport, ProtocolConfig, one_way_key_rate, two_way_key_rate
from ..sources import SourceSpec, SubtractionSpec
from .search import golden_section_max

logger = logging.getLogger(__name__)


class Side(str, Enum):
    NONE = "none"
    ALICE = "alice"
    BOB = "bob"
    BOTH = "both"


@dataclass(frozen=True)
class TpsSearch:
    """
    Args:
        grid_points: coarse grid size on [low, high]
        low: smallest T_PS tried
        high: largest T_PS tried
        tol: golden-section bracket width
        rounds: alternating rounds when both sides subtract
    """

    grid_points: int = 21
    low: float = 0.01
    high: float = 1.0
    tol: float = 1e-4
    rounds: int = 2

    def __post_init__(self):
        if self.grid_points < 3:
            raise ContractViolation(f"grid needs at least 3 points, got {self.grid_points}")
        if not 0.0 < self.low < self.high <= 1.0:
            raise ContractViolation(f"T_PS range must satisfy 0 < low < high <= 1, got [{self.low}, {self.high}]")
        if self.tol <= 0:
            raise ContractViolation(f"tolerance must be positive, got {self.tol}")
        if self.rounds < 1:
            raise ContractViolation(f"rounds must be at least 1, got {self.rounds}")

    def grid(self) -> np.ndarray:
        return np.linspace(self.low, self.high, self.grid_points)


@dataclass(frozen=True)
class TpsOptimum:
    t_ps_alice: float
    t_ps_bob: float
    report: KeyRateReport

    @property
    def positive(self) -> bool:
        return self.report.k_ps > 0.0


def maximize_rate(evaluate: Callable[[float], KeyRateReport], search: TpsSearch) -> Tuple[float, KeyRateReport]:
    """
    Grid plus golden-section maximisation of ``evaluate(t).k_ps`` over T_PS.

    A T_PS whose success probability is zero never yields a key and scores
    minus infinity, so it is only returned when no other grid point exists
    with a finite score.
    """
    cache: Dict[float, KeyRateReport] = {}

    def report_at(t: float) -> KeyRateReport:
        t = float(t)
        if t not in cache:
            cache[t] = evaluate(t)
        return cache[t]

    def score(t: float) -> float:
        report = report_at(t)
        return report.k_ps if report.p_success > 0.0 else -math.inf

    grid = search.grid()
    scores = [score(t) for t in grid]
    best = int(np.argmax(scores))
    lo = grid[max(best - 1, 0)]
    hi = grid[min(best + 1, len(grid) - 1)]

    t_star, _ = golden_section_max(score, lo, hi, search.tol)
    grid_t = float(grid[best])
    if score(t_star) < scores[best]:
        t_star = grid_t
    logger.debug("T_PS optimum %.6f (grid best %.4f), rate %.6g", t_star, grid_t, report_at(t_star).k_ps)
    return float(t_star), report_at(t_star)


def _start_point(sub: SubtractionSpec) -> float:
    return sub.t_ps if sub.t_ps < 1.0 else 0.5


def optimize_tps(cfg: ProtocolConfig, side: Side = Side.ALICE, search: TpsSearch = TpsSearch()) -> TpsOptimum:
    """
    Maximise the two-way rate over the T_PS of the subtracting side(s).

    A side with k = 0 is pinned at T_PS = 1 (no subtraction). An optimum
    whose rate is not positive is still returned; check ``positive``.
    """
    side = Side(side)
    alice_sub, bob_sub = cfg.alice_sub, cfg.bob_sub
    if side in (Side.ALICE, Side.BOTH) and alice_sub.k == 0:
        alice_sub = SubtractionSpec.disabled()
    if side in (Side.BOB, Side.BOTH) and bob_sub.k == 0:
        bob_sub = SubtractionSpec.disabled()
    opt_alice = side in (Side.ALICE, Side.BOTH) and alice_sub.k > 0
    opt_bob = side in (Side.BOB, Side.BOTH) and bob_sub.k > 0
    t_alice = _start_point(alice_sub) if opt_alice else alice_sub.t_ps
    t_bob = _start_point(bob_sub) if opt_bob else bob_sub.t_ps

    def rate(ta: float, tb: float) -> KeyRateReport:
        return two_way_key_rate(cfg.with_subtraction(alice=alice_sub.with_t_ps(ta), bob=bob_sub.with_t_ps(tb)))

    rounds = search.rounds if (opt_alice and opt_bob) else 1
    for _ in range(rounds):
        if opt_alice:
            t_alice, _ = maximize_rate(lambda t: rate(t, t_bob), search)
        if opt_bob:
            t_bob, _ = maximize_rate(lambda t: rate(t_alice, t), search)

    optimum = TpsOptimum(t_alice, t_bob, rate(t_alice, t_bob))
    if not optimum.positive:
        logger.debug("no positive rate for side=%s at t1=%g", side.value, cfg.forward.t)
    return optimum


def optimize_one_way_tps(
    src: SourceSpec, sub: SubtractionSpec, ch: ChannelSpec, beta: float, search: TpsSearch = TpsSearch()
) -> TpsOptimum:
    """Same search for the one-way protocol; ``sub.k = 0`` means no subtraction"""
    if sub.k == 0:
        return TpsOptimum(1.0, 1.0, one_way_key_rate(src, SubtractionSpec(), ch, beta))
    t_star, report = maximize_rate(lambda t: one_way_key_rate(src, SubtractionSpec(sub.k, t), ch, beta), search)
    return TpsOptimum(t_star, 1.0, report)
