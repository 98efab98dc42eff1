"""
Photon-Subtracted Sources
~~~~~~~~~~~~~~~~~~~~~~~~~

TMSV sources with optional virtual photon subtraction: closed-form
covariance, success and selection probabilities, and two verification
oracles (Fock series and heterodyne integration).
"""

from .oracles import (
    IntegrationGrid,
    OracleCheck,
    check_oracles,
    fock_oracle_covariance,
    fock_truncation_order,
    integral_oracle_covariance,
    oracle_triangle,
)
from .specs import SourceSpec, SubtractionSpec, TwoModeCovariance
from .subtraction import (
    probability_turning_point,
    selection_probability,
    subtracted_covariance,
    success_probability,
)

__all__ = [
    "SourceSpec",
    "SubtractionSpec",
    "TwoModeCovariance",
    "subtracted_covariance",
    "success_probability",
    "selection_probability",
    "probability_turning_point",
    "fock_oracle_covariance",
    "fock_truncation_order",
    "integral_oracle_covariance",
    "IntegrationGrid",
    "OracleCheck",
    "check_oracles",
    "oracle_triangle",
]
