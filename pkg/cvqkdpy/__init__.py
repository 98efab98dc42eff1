"""
Two-Way CV-QKD Key Rates with Virtual Photon Subtraction
~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~

Asymptotic secure key rates of the two-way continuous-variable QKD
protocol under entangling-cloner attacks, with virtually photon-subtracted
sources at Alice, Bob or both.

Basic usage:
    >>> from cvqkdpy import CVQKDClient
    >>> client = CVQKDClient(v=40, beta=0.95, eps=0.01)
    >>> client.key_rate(distance_km=50, scheme="alice-k1").k_ps
"""

from .client import CVQKDClient
from .errors import (
    AccuracyWarning,
    ConfigError,
    ContractViolation,
    CVQKDError,
    DegenerateEstimatorError,
    TruncationError,
    UnphysicalStateError,
)

__version__ = "0.1.0"

__all__ = [
    "CVQKDClient",
    "CVQKDError",
    "AccuracyWarning",
    "ConfigError",
    "ContractViolation",
    "DegenerateEstimatorError",
    "TruncationError",
    "UnphysicalStateError",
]
