from typing import Dict, Iterable, Optional, Union

from .analysis import (
    Experiment,
    NoiseTolerance,
    Scheme,
    Side,
    SweepResult,
    TpsOptimum,
    TpsSearch,
    compare_schemes,
    max_distance,
    sweep_distance,
    tolerable_excess_noise,
)
from .cli.config import load_run_config
from .protocols import Conditioning, KeyRateReport, ProtocolConfig
from .sources import SourceSpec

SchemeLike = Union[str, Scheme]


class CVQKDClient:
    """Main entry point for key-rate calculations"""

    def __init__(self, config_path: Optional[str] = None,
                 v: Optional[float] = None,
                 beta: Optional[float] = None,
                 eps: Optional[float] = None,
                 t_a: float = 0.5,
                 v_alice: Optional[float] = None,
                 v_bob: Optional[float] = None,
                 eps1: Optional[float] = None,
                 eps2: Optional[float] = None,
                 loss_db_per_km: float = 0.2,
                 mu: Union[str, float] = "optimal",
                 conditioning: str = Conditioning.HETERODYNE.value,
                 search: Optional[TpsSearch] = None):
        """
        Initialize with either a run configuration file or direct parameters
        """
        if config_path:
            run = load_run_config(config_path)
            self.experiment = run.experiment()
            self.default_scheme = run.scheme()
            return

        if any(x is None for x in (v, beta, eps)):
            raise ValueError("Missing required parameters: v, beta and eps")

        base = ProtocolConfig(
            alice_src=SourceSpec(v if v_alice is None else v_alice),
            bob_src=SourceSpec(v if v_bob is None else v_bob),
            t_a=t_a,
            beta=beta,
            mu_policy=mu,
            conditioning=conditioning,
        )
        self.experiment = Experiment(
            base=base,
            eps_forward=eps if eps1 is None else eps1,
            eps_backward=eps if eps2 is None else eps2,
            loss_db_per_km=loss_db_per_km,
            search=search or TpsSearch(),
        )
        self.default_scheme = Scheme()

    def _scheme(self, scheme: Optional[SchemeLike]) -> Scheme:
        if scheme is None:
            return self.default_scheme
        if isinstance(scheme, Scheme):
            return scheme
        return Scheme.parse(scheme)

    def key_rate(self, distance_km: float, scheme: Optional[SchemeLike] = None,
                 eps: Optional[float] = None) -> KeyRateReport:
        """
        Key rate at one distance, T_PS optimised unless the scheme pins it

        Args:
            distance_km: fibre length of each channel
            scheme: e.g. "original", "alice-k1", "both-k1", "gg02"
            eps: excess noise for both channels instead of the configured values
        """
        return self.experiment.evaluate(self._scheme(scheme), distance_km, eps).report

    def one_way_key_rate(self, distance_km: float, k: int = 0) -> KeyRateReport:
        """One-way baseline; k = 0 is GG02"""
        return self.key_rate(distance_km, Scheme(protocol="one-way", k_alice=k))

    def optimize_tps(self, distance_km: float, side: Union[str, Side] = Side.ALICE, k: int = 1) -> TpsOptimum:
        evaluation = self.experiment.evaluate(Scheme.for_side(Side(side), k), distance_km)
        return TpsOptimum(evaluation.t_ps_alice, evaluation.t_ps_bob, evaluation.report)

    def max_distance(self, scheme: Optional[SchemeLike] = None, cutoff: float = 1e-8) -> float:
        return max_distance(self.experiment, self._scheme(scheme), cutoff)

    def tolerable_excess_noise(self, distance_km: float, scheme: Optional[SchemeLike] = None,
                               optimize: bool = True) -> NoiseTolerance:
        return tolerable_excess_noise(self.experiment, self._scheme(scheme), distance_km, optimize=optimize)

    def compare(self, distances: Iterable[float], k: int = 1,
                threads: Optional[int] = None) -> Dict[str, SweepResult]:
        return compare_schemes(self.experiment, distances, k, threads)

    def sweep_distance(self, distances: Iterable[float], scheme: Optional[SchemeLike] = None,
                       threads: Optional[int] = None) -> SweepResult:
        return sweep_distance(self.experiment, self._scheme(scheme), distances, threads)
