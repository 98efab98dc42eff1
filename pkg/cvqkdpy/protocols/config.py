import math
from dataclasses import asdict, dataclass, field, replace
from enum import Enum
from typing import Any, Dict, Optional, Union

from ..errors import ContractViolation
from ..sources import SourceSpec, SubtractionSpec
from .channel import ChannelSpec

OPTIMAL_MU = "optimal"


class Conditioning(str, Enum):
    """How Bob's heterodyne on B1 enters the estimator and the conditional state"""

    # B1 split on a balanced splitter, Gamma_mu on the x (or p) output, 4 conditional modes
    HETERODYNE = "heterodyne"
    # Gamma_mu directly on B1, 3 conditional modes
    MODE = "mode"


@dataclass(frozen=True)
class ProtocolConfig:
    """
    Everything one two-way key-rate evaluation needs.

    Args:
        alice_src: Alice's TMSV source (A1, A4)
        bob_src: Bob's TMSV source (B1, B4)
        alice_sub: photon subtraction on Alice's sent arm
        bob_sub: photon subtraction on Bob's sent arm
        t_a: transmittance of Alice's coupling beam splitter
        forward: Bob -> Alice channel
        backward: Alice -> Bob channel
        beta: reconciliation efficiency
        mu_policy: ``"optimal"`` or an explicit estimator coefficient
        conditioning: see :class:`Conditioning`
    """

    alice_src: SourceSpec
    bob_src: SourceSpec
    alice_sub: SubtractionSpec = field(default_factory=SubtractionSpec)
    bob_sub: SubtractionSpec = field(default_factory=SubtractionSpec)
    t_a: float = 0.5
    forward: ChannelSpec = field(default_factory=lambda: ChannelSpec(1.0))
    backward: ChannelSpec = field(default_factory=lambda: ChannelSpec(1.0))
    beta: float = 0.95
    mu_policy: Union[str, float] = OPTIMAL_MU
    conditioning: Conditioning = Conditioning.HETERODYNE

    def __post_init__(self):
        if not (math.isfinite(self.t_a) and 0.0 <= self.t_a <= 1.0):
            raise ContractViolation(f"t_a must be in [0, 1], got {self.t_a}")
        if not (math.isfinite(self.beta) and 0.0 <= self.beta <= 1.0):
            raise ContractViolation(f"beta must be in [0, 1], got {self.beta}")
        if isinstance(self.mu_policy, str):
            if self.mu_policy != OPTIMAL_MU:
                raise ContractViolation(f"mu_policy must be {OPTIMAL_MU!r} or a number, got {self.mu_policy!r}")
        elif isinstance(self.mu_policy, bool) or not math.isfinite(float(self.mu_policy)):
            raise ContractViolation(f"explicit mu must be a finite number, got {self.mu_policy!r}")
        try:
            object.__setattr__(self, "conditioning", Conditioning(self.conditioning))
        except ValueError:
            raise ContractViolation(
                f"conditioning must be one of {[c.value for c in Conditioning]}, got {self.conditioning!r}"
            ) from None

    @property
    def explicit_mu(self) -> Optional[float]:
        return None if isinstance(self.mu_policy, str) else float(self.mu_policy)

    def with_subtraction(
        self, alice: Optional[SubtractionSpec] = None, bob: Optional[SubtractionSpec] = None
    ) -> "ProtocolConfig":
        return replace(
            self,
            alice_sub=self.alice_sub if alice is None else alice,
            bob_sub=self.bob_sub if bob is None else bob,
        )

    def with_channels(self, forward: ChannelSpec, backward: ChannelSpec) -> "ProtocolConfig":
        return replace(self, forward=forward, backward=backward)

    def snapshot(self) -> Dict[str, Any]:
        """Plain-dict view for result metadata"""
        out = asdict(self)
        out["conditioning"] = self.conditioning.value
        return out
