import logging
from dataclasses import dataclass
from typing import List, Literal, Sequence, Union

import numpy as np
from scipy.linalg import block_diag
from scipy.special import xlogy

from ..errors import ContractViolation, UnphysicalStateError

logger = logging.getLogger(__name__)

Quadrature = Literal["x", "p"]

SYMMETRY_RTOL = 1e-12
PHYSICAL_ATOL = 1e-9
SYMPLECTIC_ATOL = 1e-10
PINV_CUTOFF = 1e-12

# 2x2 block conventions, shot-noise units, ordering (x, p)
IDENTITY = np.eye(2)
SIGMA_Z = np.diag([1.0, -1.0])
OMEGA_1 = np.array([[0.0, 1.0], [-1.0, 0.0]])


def omega(n_modes: int) -> np.ndarray:
    """Standard symplectic form for ``n_modes`` modes in (x1, p1, x2, p2, ...) order"""
    if n_modes < 1:
        raise ContractViolation(f"n_modes must be positive, got {n_modes}")
    return block_diag(*([OMEGA_1] * n_modes))


def quadrature_offset(quadrature: str) -> int:
    if quadrature == "x":
        return 0
    if quadrature == "p":
        return 1
    raise ContractViolation(f"quadrature must be 'x' or 'p', got {quadrature!r}")


@dataclass(frozen=True, eq=False)
class CovarianceMatrix:
    """
    Real symmetric 2n x 2n matrix of quadrature second moments.

    Zero-mean states only; vacuum variance is 1.
    """

    matrix: np.ndarray

    def __post_init__(self):
        m = np.array(self.matrix, dtype=float)
        if m.ndim != 2 or m.shape[0] != m.shape[1] or m.shape[0] % 2 or m.shape[0] == 0:
            raise ContractViolation(f"covariance matrix must be 2n x 2n, got shape {m.shape}")
        scale = max(1.0, float(np.max(np.abs(m))))
        if np.max(np.abs(m - m.T)) > SYMMETRY_RTOL * scale:
            raise ContractViolation("covariance matrix is not symmetric")
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)

    @property
    def n_modes(self) -> int:
        return self.matrix.shape[0] // 2

    def block(self, mode_a: int, mode_b: int) -> np.ndarray:
        self._check_mode(mode_a)
        self._check_mode(mode_b)
        return self.matrix[2 * mode_a:2 * mode_a + 2, 2 * mode_b:2 * mode_b + 2].copy()

    def covariance(self, mode_a: int, mode_b: int, quadrature: Quadrature = "x") -> float:
        q = quadrature_offset(quadrature)
        return float(self.block(mode_a, mode_b)[q, q])

    def variance(self, mode: int, quadrature: Quadrature = "x") -> float:
        return self.covariance(mode, mode, quadrature)

    def marginal(self, modes: Sequence[int]) -> "CovarianceMatrix":
        """Reduced state of ``modes``, in the order given (also used to permute)"""
        for mode in modes:
            self._check_mode(mode)
        if len(set(modes)) != len(modes):
            raise ContractViolation(f"repeated mode in {list(modes)}")
        idx = [2 * m + q for m in modes for q in (0, 1)]
        return CovarianceMatrix(self.matrix[np.ix_(idx, idx)])

    def permute(self, order: Sequence[int]) -> "CovarianceMatrix":
        if sorted(order) != list(range(self.n_modes)):
            raise ContractViolation(f"{list(order)} is not a permutation of {self.n_modes} modes")
        return self.marginal(order)

    def direct_sum(self, other: "CovarianceMatrix") -> "CovarianceMatrix":
        return CovarianceMatrix(block_diag(self.matrix, other.matrix))

    def allclose(self, other: "CovarianceMatrix", atol: float) -> bool:
        return self.matrix.shape == other.matrix.shape and bool(
            np.max(np.abs(self.matrix - other.matrix)) <= atol
        )

    def _check_mode(self, mode: int):
        if not 0 <= mode < self.n_modes:
            raise ContractViolation(f"mode index {mode} out of range for {self.n_modes} modes")

    @classmethod
    def vacuum(cls, n_modes: int = 1) -> "CovarianceMatrix":
        return cls(np.eye(2 * n_modes))

    @classmethod
    def thermal(cls, v: float) -> "CovarianceMatrix":
        return cls(v * IDENTITY)


@dataclass(frozen=True, eq=False)
class SymplecticTransform:
    """Real 2n x 2n matrix S with S Omega S^T = Omega"""

    matrix: np.ndarray

    def __post_init__(self):
        s = np.array(self.matrix, dtype=float)
        if s.ndim != 2 or s.shape[0] != s.shape[1] or s.shape[0] % 2 or s.shape[0] == 0:
            raise ContractViolation(f"symplectic matrix must be 2n x 2n, got shape {s.shape}")
        s.setflags(write=False)
        object.__setattr__(self, "matrix", s)
        if self.symplectic_residual() >= SYMPLECTIC_ATOL:
            raise ContractViolation(
                f"matrix is not symplectic (residual {self.symplectic_residual():.3e})"
            )

    @property
    def n_modes(self) -> int:
        return self.matrix.shape[0] // 2

    def symplectic_residual(self) -> float:
        w = omega(self.n_modes)
        return float(np.max(np.abs(self.matrix @ w @ self.matrix.T - w)))

    @classmethod
    def identity(cls, n_modes: int) -> "SymplecticTransform":
        return cls(np.eye(2 * n_modes))


CovarianceLike = Union[CovarianceMatrix, np.ndarray]


def as_covariance(gamma: CovarianceLike) -> CovarianceMatrix:
    if isinstance(gamma, CovarianceMatrix):
        return gamma
    return CovarianceMatrix(np.asarray(gamma, dtype=float))


def g_entropy(nu: float) -> float:
    """
    Von Neumann entropy (bits) of a thermal mode with symplectic eigenvalue ``nu``.

    Args:
        nu: symplectic eigenvalue; values in [1 - 1e-9, 1] count as pure
    """
    if not np.isfinite(nu) or nu < 1 - PHYSICAL_ATOL:
        raise UnphysicalStateError("symplectic eigenvalue below 1", [nu])
    if nu <= 1:
        return 0.0
    plus, minus = (nu + 1) / 2, (nu - 1) / 2
    return float((xlogy(plus, plus) - xlogy(minus, minus)) / np.log(2))


def symplectic_eigenvalues(gamma: CovarianceLike) -> List[float]:
    """
    Symplectic spectrum, descending.

    The eigenvalues of i*Omega*gamma come in +/- pairs; each pair is reduced to
    its mean modulus. Values within 1e-9 below 1 are clamped to 1.
    """
    gamma = as_covariance(gamma)
    eig = np.linalg.eigvals(1j * omega(gamma.n_modes) @ gamma.matrix)
    moduli = np.sort(np.abs(eig))[::-1]
    first, second = moduli[0::2], moduli[1::2]
    mismatch = np.abs(first - second)
    if np.any(mismatch > PHYSICAL_ATOL * np.maximum(1.0, first)):
        logger.debug("symplectic pair mismatch up to %.3e", float(mismatch.max()))
    nus = (first + second) / 2
    nus = np.where((nus >= 1 - PHYSICAL_ATOL) & (nus < 1), 1.0, nus)
    return [float(v) for v in nus]


def entropy(gamma: CovarianceLike) -> float:
    """Total von Neumann entropy (bits) of a Gaussian state"""
    nus = symplectic_eigenvalues(gamma)
    try:
        return sum(g_entropy(nu) for nu in nus)
    except UnphysicalStateError as exc:
        raise UnphysicalStateError("state violates the uncertainty principle", nus) from exc


def apply_symplectic(gamma: CovarianceLike, s: SymplecticTransform) -> CovarianceMatrix:
    """gamma -> S gamma S^T"""
    gamma = as_covariance(gamma)
    if s.matrix.shape != gamma.matrix.shape:
        raise ContractViolation(
            f"dimension mismatch: transform {s.matrix.shape} vs state {gamma.matrix.shape}"
        )
    out = np.linalg.multi_dot([s.matrix, gamma.matrix, s.matrix.T])
    return CovarianceMatrix((out + out.T) / 2)


def beam_splitter_symplectic(t: float, mode_a: int, mode_b: int, n_modes: int) -> SymplecticTransform:
    """
    Two-mode mixing with power transmittance ``t``.

    Acts as [[sqrt(t), sqrt(1-t)], [-sqrt(1-t), sqrt(t)]] on (q_a, q_b) for
    q = x and q = p; identity on every other mode.
    """
    if not 0.0 <= t <= 1.0:
        raise ContractViolation(f"transmittance must be in [0, 1], got {t}")
    for mode in (mode_a, mode_b):
        if not 0 <= mode < n_modes:
            raise ContractViolation(f"mode index {mode} out of range for {n_modes} modes")
    if mode_a == mode_b:
        raise ContractViolation("beam splitter needs two distinct modes")
    s = np.eye(2 * n_modes)
    ct, st = np.sqrt(t), np.sqrt(1.0 - t)
    for q in (0, 1):
        a, b = 2 * mode_a + q, 2 * mode_b + q
        s[a, a], s[a, b] = ct, st
        s[b, a], s[b, b] = -st, ct
    return SymplecticTransform(s)


def two_mode_covariance(v1: float, c: float, v2: float) -> CovarianceMatrix:
    """[[v1 I, c sigma_z], [c sigma_z, v2 I]]"""
    return CovarianceMatrix(np.block([[v1 * IDENTITY, c * SIGMA_Z], [c * SIGMA_Z, v2 * IDENTITY]]))


def tmsv_covariance(v: float) -> CovarianceMatrix:
    """Two-mode squeezed vacuum with quadrature variance ``v`` on each arm"""
    if not v >= 1.0:
        raise ContractViolation(f"TMSV variance must be >= 1, got {v}")
    return two_mode_covariance(v, float(np.sqrt(v * v - 1.0)), v)


def homodyne_condition(gamma: CovarianceLike, measured_mode: int, quadrature: Quadrature = "x") -> CovarianceMatrix:
    """
    Conditional covariance of the other modes after homodyning one quadrature.

    gamma_cond = A - C (X B X)^MP C^T. The pseudo-inverse of the rank-one
    block is the reciprocal of the measured variance, or zero below 1e-12.
    """
    gamma = as_covariance(gamma)
    n = gamma.n_modes
    if n < 2:
        raise ContractViolation("homodyne conditioning needs at least two modes")
    if not 0 <= measured_mode < n:
        raise ContractViolation(f"mode index {measured_mode} out of range for {n} modes")
    q = quadrature_offset(quadrature)

    measured = [2 * measured_mode, 2 * measured_mode + 1]
    rest = [i for i in range(2 * n) if i not in measured]
    m = gamma.matrix
    a = m[np.ix_(rest, rest)]
    b = m[np.ix_(measured, measured)]
    c = m[np.ix_(rest, measured)]

    pinv = np.zeros((2, 2))
    if b[q, q] > PINV_CUTOFF:
        pinv[q, q] = 1.0 / b[q, q]
    cond = a - np.linalg.multi_dot([c, pinv, c.T])
    return CovarianceMatrix((cond + cond.T) / 2)


def heterodyne_split(gamma: CovarianceLike, mode: int) -> CovarianceMatrix:
    """
    Model heterodyne detection of ``mode`` as a balanced beam splitter with vacuum.

    The returned state has one extra mode appended. The x reading is taken on
    ``mode`` and the p reading on the appended mode.
    """
    gamma = as_covariance(gamma)
    if not 0 <= mode < gamma.n_modes:
        raise ContractViolation(f"mode index {mode} out of range for {gamma.n_modes} modes")
    extended = gamma.direct_sum(CovarianceMatrix.vacuum())
    splitter = beam_splitter_symplectic(0.5, mode, gamma.n_modes, extended.n_modes)
    return apply_symplectic(extended, splitter)
