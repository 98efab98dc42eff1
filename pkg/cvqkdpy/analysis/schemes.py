import math
import re
from dataclasses import dataclass, field, replace
from typing import Any, Dict, Optional, Tuple

from ..errors import ContractViolation
from ..protocols import ChannelSpec, KeyRateReport, ProtocolConfig, one_way_key_rate, two_way_key_rate
from ..sources import SubtractionSpec
from .optimize import Side, TpsOptimum, TpsSearch, optimize_one_way_tps, optimize_tps

TWO_WAY = "two-way"
ONE_WAY = "one-way"
DEFAULT_LOSS_DB_PER_KM = 0.2

_SIDE_PATTERN = re.compile(r"^(alice|bob|both)-k(\d+)$")
_ONE_WAY_PATTERN = re.compile(r"^one-way(?:-k(\d+))?$")


def distance_to_channel(l_km: float, eps: float, loss_db_per_km: float = DEFAULT_LOSS_DB_PER_KM) -> ChannelSpec:
    """Fibre span of ``l_km`` kilometres: t = 10^(-loss * L / 10)"""
    if not (math.isfinite(l_km) and l_km >= 0):
        raise ContractViolation(f"distance must be a finite non-negative number, got {l_km}")
    if not (math.isfinite(loss_db_per_km) and loss_db_per_km >= 0):
        raise ContractViolation(f"loss must be finite and >= 0 dB/km, got {loss_db_per_km}")
    return ChannelSpec(t=10.0 ** (-loss_db_per_km * l_km / 10.0), eps=eps)


@dataclass(frozen=True)
class Scheme:
    """
    One curve of a comparison: protocol family plus photon subtraction per side.

    ``t_ps_alice``/``t_ps_bob`` pin T_PS; ``None`` means optimise it at
    every point.
    """

    protocol: str = TWO_WAY
    k_alice: int = 0
    k_bob: int = 0
    t_ps_alice: Optional[float] = None
    t_ps_bob: Optional[float] = None

    def __post_init__(self):
        if self.protocol not in (TWO_WAY, ONE_WAY):
            raise ContractViolation(f"protocol must be {TWO_WAY!r} or {ONE_WAY!r}, got {self.protocol!r}")
        if self.protocol == ONE_WAY and self.k_bob:
            raise ContractViolation("the one-way protocol has no subtraction on Bob's side")
        # validates k and t_ps ranges
        SubtractionSpec(self.k_alice, self.t_ps_alice or 1.0)
        SubtractionSpec(self.k_bob, self.t_ps_bob or 1.0)

    @property
    def side(self) -> Side:
        if self.k_alice and self.k_bob:
            return Side.BOTH
        if self.k_alice:
            return Side.ALICE
        if self.k_bob:
            return Side.BOB
        return Side.NONE

    @property
    def name(self) -> str:
        if self.protocol == ONE_WAY:
            return f"one-way-k{self.k_alice}" if self.k_alice else "gg02"
        if self.side is Side.NONE:
            return "original"
        if self.side is Side.BOTH and self.k_alice != self.k_bob:
            return f"alice-k{self.k_alice}-bob-k{self.k_bob}"
        return f"{self.side.value}-k{self.k_alice or self.k_bob}"

    @property
    def optimizes(self) -> bool:
        return (bool(self.k_alice) and self.t_ps_alice is None) or (bool(self.k_bob) and self.t_ps_bob is None)

    def with_t_ps(self, alice: Optional[float] = None, bob: Optional[float] = None) -> "Scheme":
        return replace(self, t_ps_alice=alice, t_ps_bob=bob)

    @classmethod
    def parse(cls, name: str) -> "Scheme":
        """original | none | gg02 | one-way[-kN] | alice-kN | bob-kN | both-kN"""
        text = name.strip().lower()
        if text in ("original", "none"):
            return cls()
        if text == "gg02":
            return cls(protocol=ONE_WAY)
        match = _ONE_WAY_PATTERN.match(text)
        if match:
            return cls(protocol=ONE_WAY, k_alice=int(match.group(1) or 0))
        match = _SIDE_PATTERN.match(text)
        if match:
            side, k = match.group(1), int(match.group(2))
            return cls(
                k_alice=k if side in ("alice", "both") else 0,
                k_bob=k if side in ("bob", "both") else 0,
            )
        raise ContractViolation(f"unknown scheme {name!r}")

    @classmethod
    def for_side(cls, side: Side, k: int = 1) -> "Scheme":
        side = Side(side)
        return cls(
            k_alice=k if side in (Side.ALICE, Side.BOTH) else 0,
            k_bob=k if side in (Side.BOB, Side.BOTH) else 0,
        )


@dataclass(frozen=True)
class Evaluation:
    report: KeyRateReport
    t_ps_alice: float
    t_ps_bob: float
    scheme: Scheme

    @property
    def t_ps_used(self) -> float:
        """T_PS of the subtracting side (Alice's when both subtract)"""
        if self.scheme.k_alice:
            return self.t_ps_alice
        if self.scheme.k_bob:
            return self.t_ps_bob
        return 1.0


@dataclass(frozen=True)
class Experiment:
    """
    Fixed physical setting in which schemes are compared.

    ``base`` carries the sources, t_a, beta and estimator policy; its
    channels are replaced at every distance from ``eps_forward``,
    ``eps_backward`` and ``loss_db_per_km``.
    """

    base: ProtocolConfig
    eps_forward: float = 0.01
    eps_backward: float = 0.01
    loss_db_per_km: float = DEFAULT_LOSS_DB_PER_KM
    search: TpsSearch = field(default_factory=TpsSearch)

    def channels(self, distance_km: float, eps: Optional[float] = None) -> Tuple[ChannelSpec, ChannelSpec]:
        """Forward and backward channels over the same span; a single ``eps`` applies to both"""
        eps_fw = self.eps_forward if eps is None else eps
        eps_bw = self.eps_backward if eps is None else eps
        return (
            distance_to_channel(distance_km, eps_fw, self.loss_db_per_km),
            distance_to_channel(distance_km, eps_bw, self.loss_db_per_km),
        )

    def evaluate(self, scheme: Scheme, distance_km: float, eps: Optional[float] = None) -> Evaluation:
        forward, backward = self.channels(distance_km, eps)
        return self.evaluate_on(scheme, forward, backward)

    def evaluate_on(self, scheme: Scheme, forward: ChannelSpec, backward: ChannelSpec) -> Evaluation:
        """Evaluate on explicit channels; the one-way protocol uses ``forward`` only"""
        if scheme.protocol == ONE_WAY:
            optimum = self._one_way(scheme, forward)
        else:
            optimum = self._two_way(scheme, forward, backward)
        return Evaluation(optimum.report, optimum.t_ps_alice, optimum.t_ps_bob, scheme)

    def _one_way(self, scheme: Scheme, channel: ChannelSpec) -> TpsOptimum:
        src, beta = self.base.alice_src, self.base.beta
        if scheme.k_alice and scheme.t_ps_alice is not None:
            sub = SubtractionSpec(scheme.k_alice, scheme.t_ps_alice)
            return TpsOptimum(sub.t_ps, 1.0, one_way_key_rate(src, sub, channel, beta))
        return optimize_one_way_tps(src, SubtractionSpec(scheme.k_alice, 0.5), channel, beta, self.search)

    def _two_way(self, scheme: Scheme, forward: ChannelSpec, backward: ChannelSpec) -> TpsOptimum:
        cfg = self.base.with_channels(forward, backward).with_subtraction(
            alice=self._subtraction(scheme.k_alice, scheme.t_ps_alice),
            bob=self._subtraction(scheme.k_bob, scheme.t_ps_bob),
        )
        if not scheme.optimizes:
            return TpsOptimum(cfg.alice_sub.t_ps, cfg.bob_sub.t_ps, two_way_key_rate(cfg))
        if scheme.side is Side.BOTH:
            # only the unpinned side(s) move
            if scheme.t_ps_alice is not None:
                return optimize_tps(cfg, Side.BOB, self.search)
            if scheme.t_ps_bob is not None:
                return optimize_tps(cfg, Side.ALICE, self.search)
        return optimize_tps(cfg, scheme.side, self.search)

    @staticmethod
    def _subtraction(k: int, t_ps: Optional[float]) -> SubtractionSpec:
        if k == 0:
            return SubtractionSpec.disabled()
        return SubtractionSpec(k, 0.5 if t_ps is None else t_ps)

    def rate(self, scheme: Scheme, distance_km: float, eps: Optional[float] = None) -> float:
        return self.evaluate(scheme, distance_km, eps).report.k_ps

    def snapshot(self) -> Dict[str, Any]:
        return {
            "protocol": self.base.snapshot(),
            "eps_forward": self.eps_forward,
            "eps_backward": self.eps_backward,
            "loss_db_per_km": self.loss_db_per_km,
            "search": {
                "grid_points": self.search.grid_points,
                "low": self.search.low,
                "high": self.search.high,
                "tol": self.search.tol,
                "rounds": self.search.rounds,
            },
        }
