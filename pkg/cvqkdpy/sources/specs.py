import math
from dataclasses import dataclass, replace

from ..errors import ContractViolation
from ..gaussian import CovarianceMatrix, symplectic_eigenvalues, two_mode_covariance
from ..gaussian.core import PHYSICAL_ATOL


@dataclass(frozen=True)
class SourceSpec:
    """TMSV source with quadrature variance ``v`` (shot-noise units)"""

    v: float

    def __post_init__(self):
        if not (math.isfinite(self.v) and self.v >= 1.0):
            raise ContractViolation(f"source variance must be finite and >= 1, got {self.v}")

    @property
    def lambda_sq(self) -> float:
        return (self.v - 1.0) / (self.v + 1.0)

    @property
    def lambda_(self) -> float:
        return math.sqrt(self.lambda_sq)

    @property
    def r(self) -> float:
        """Two-mode squeezing parameter, lambda = tanh(r)"""
        return math.atanh(self.lambda_)

    @classmethod
    def from_lambda(cls, lam: float) -> "SourceSpec":
        if not 0.0 <= lam < 1.0:
            raise ContractViolation(f"lambda must be in [0, 1), got {lam}")
        return cls((1.0 + lam * lam) / (1.0 - lam * lam))


@dataclass(frozen=True)
class SubtractionSpec:
    """
    Virtual photon subtraction: post-select ``k`` photons behind a splitter of
    transmittance ``t_ps``. ``k=0, t_ps=1`` means no subtraction.
    """

    k: int = 0
    t_ps: float = 1.0

    def __post_init__(self):
        if isinstance(self.k, bool) or not isinstance(self.k, int) or self.k < 0:
            raise ContractViolation(f"photon count must be a non-negative integer, got {self.k!r}")
        if not (math.isfinite(self.t_ps) and 0.0 < self.t_ps <= 1.0):
            raise ContractViolation(f"subtraction transmittance must be in (0, 1], got {self.t_ps}")

    @property
    def enabled(self) -> bool:
        return not (self.k == 0 and self.t_ps == 1.0)

    def with_t_ps(self, t_ps: float) -> "SubtractionSpec":
        return replace(self, t_ps=t_ps)

    @classmethod
    def disabled(cls) -> "SubtractionSpec":
        return cls()

    @classmethod
    def photons(cls, k: int, t_ps: float) -> "SubtractionSpec":
        return cls(k=k, t_ps=t_ps)


@dataclass(frozen=True)
class TwoModeCovariance:
    """
    Symmetric two-mode state [[v1 I, c Z], [c Z, v2 I]].

    ``v1`` is the retained mode, ``v2`` the transmitted one.
    """

    v1: float
    c: float
    v2: float

    def __post_init__(self):
        if not (self.v1 >= 1.0 - PHYSICAL_ATOL and self.v2 >= 1.0 - PHYSICAL_ATOL):
            raise ContractViolation(f"variances must be >= 1, got v1={self.v1}, v2={self.v2}")
        if self.c * self.c > self.v1 * self.v2:
            raise ContractViolation(f"correlation {self.c} exceeds sqrt(v1 v2)")
        nus = symplectic_eigenvalues(self.to_covariance())
        if min(nus) < 1.0 - PHYSICAL_ATOL:
            raise ContractViolation(f"two-mode covariance is unphysical, spectrum {nus}")

    def to_covariance(self) -> CovarianceMatrix:
        return two_mode_covariance(self.v1, self.c, self.v2)

    def max_deviation(self, other: "TwoModeCovariance") -> float:
        return max(abs(self.v1 - other.v1), abs(self.c - other.c), abs(self.v2 - other.v2))

    def as_tuple(self):
        return (self.v1, self.c, self.v2)
