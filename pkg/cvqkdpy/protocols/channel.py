import math
from dataclasses import dataclass

from ..errors import ContractViolation
from ..gaussian import (
    CovarianceMatrix,
    CovarianceLike,
    apply_symplectic,
    as_covariance,
    beam_splitter_symplectic,
)


@dataclass(frozen=True)
class ChannelSpec:
    """Thermal-loss channel: transmittance ``t`` and excess noise ``eps`` (SNU)"""

    t: float
    eps: float = 0.0

    def __post_init__(self):
        if not (math.isfinite(self.t) and 0.0 < self.t <= 1.0):
            raise ContractViolation(f"channel transmittance must be in (0, 1], got {self.t}")
        if not (math.isfinite(self.eps) and self.eps >= 0.0):
            raise ContractViolation(f"excess noise must be finite and >= 0, got {self.eps}")

    @property
    def chi(self) -> float:
        """Total added noise referred to the input, (1 - t)/t + eps"""
        return (1.0 - self.t) / self.t + self.eps

    @property
    def cloner_variance(self) -> float:
        """Variance W of Eve's injected thermal mode (t < 1 only)"""
        return 1.0 + self.t * self.eps / (1.0 - self.t)


def entangling_cloner_apply(gamma: CovarianceLike, mode: int, ch: ChannelSpec) -> CovarianceMatrix:
    """
    Send ``mode`` through an entangling-cloner channel and trace out Eve.

    The mode is mixed with a thermal mode of variance W on a splitter of
    transmittance t, so V -> tV + (1 - t)W = t(V + chi) and correlations with
    the other modes scale by sqrt(t). A lossless channel adds eps directly.
    """
    gamma = as_covariance(gamma)
    n = gamma.n_modes
    if not 0 <= mode < n:
        raise ContractViolation(f"mode index {mode} out of range for {n} modes")
    if ch.t == 1.0:
        if ch.eps == 0.0:
            return gamma
        m = gamma.matrix.copy()
        m[2 * mode, 2 * mode] += ch.eps
        m[2 * mode + 1, 2 * mode + 1] += ch.eps
        return CovarianceMatrix(m)

    extended = gamma.direct_sum(CovarianceMatrix.thermal(ch.cloner_variance))
    cloner = beam_splitter_symplectic(ch.t, mode, n, n + 1)
    return apply_symplectic(extended, cloner).marginal(list(range(n)))
