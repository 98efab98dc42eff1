"""
Key-Rate Protocols
~~~~~~~~~~~~~~~~~~

Two-way scheme with Alice's coupling beam splitter, entangling-cloner
channels, Bob's linear estimator and the one-way baseline.
"""

from .channel import ChannelSpec, entangling_cloner_apply
from .config import OPTIMAL_MU, Conditioning, ProtocolConfig
from .one_way import one_way_key_rate
from .report import KeyRateReport
from .two_way import (
    A1,
    A5,
    B1,
    B5,
    HolevoBound,
    assemble_two_way_state,
    conditional_holevo,
    estimator_mu,
    estimator_state,
    gamma_mu_transform,
    gaussian_mutual_information,
    holevo_bound,
    mutual_information,
    optimal_mu,
    two_way_key_rate,
)

__all__ = [
    "ChannelSpec",
    "entangling_cloner_apply",
    "OPTIMAL_MU",
    "Conditioning",
    "ProtocolConfig",
    "KeyRateReport",
    "HolevoBound",
    "A1",
    "A5",
    "B1",
    "B5",
    "assemble_two_way_state",
    "conditional_holevo",
    "estimator_mu",
    "estimator_state",
    "gamma_mu_transform",
    "gaussian_mutual_information",
    "holevo_bound",
    "mutual_information",
    "optimal_mu",
    "one_way_key_rate",
    "two_way_key_rate",
]
