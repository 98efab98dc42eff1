"""
Gaussian State Kernel
~~~~~~~~~~~~~~~~~~~~~

Covariance matrices, symplectic transforms, symplectic eigenvalues, the
entropy function and homodyne conditioning.
"""

from .core import (
    IDENTITY,
    SIGMA_Z,
    CovarianceLike,
    CovarianceMatrix,
    Quadrature,
    SymplecticTransform,
    apply_symplectic,
    as_covariance,
    beam_splitter_symplectic,
    entropy,
    g_entropy,
    heterodyne_split,
    homodyne_condition,
    omega,
    symplectic_eigenvalues,
    tmsv_covariance,
    two_mode_covariance,
)

__all__ = [
    "IDENTITY",
    "SIGMA_Z",
    "CovarianceLike",
    "CovarianceMatrix",
    "Quadrature",
    "SymplecticTransform",
    "apply_symplectic",
    "as_covariance",
    "beam_splitter_symplectic",
    "entropy",
    "g_entropy",
    "heterodyne_split",
    "homodyne_condition",
    "omega",
    "symplectic_eigenvalues",
    "tmsv_covariance",
    "two_mode_covariance",
]
