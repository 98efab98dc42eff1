import logging

from ..errors import ContractViolation
from ..gaussian import Quadrature, homodyne_condition
from ..sources import SourceSpec, SubtractionSpec, subtracted_covariance, success_probability
from .channel import ChannelSpec, entangling_cloner_apply
from .report import KeyRateReport
from .two_way import conditional_holevo, mutual_information

logger = logging.getLogger(__name__)


def one_way_key_rate(
    src: SourceSpec,
    sub: SubtractionSpec,
    ch: ChannelSpec,
    beta: float,
    quadrature: Quadrature = "x",
) -> KeyRateReport:
    """
    One-way coherent-state protocol with Bob homodyning and reverse reconciliation.

    Entanglement-based picture: Alice keeps A1 and sends the (optionally
    subtracted) arm through the channel; the received mode is Bob's.
    """
    if not 0.0 <= beta <= 1.0:
        raise ContractViolation(f"beta must be in [0, 1], got {beta}")
    state = entangling_cloner_apply(subtracted_covariance(src, sub).to_covariance(), 1, ch)
    mi = mutual_information(state, estimator_mode=1, alice_mode=0, quadrature=quadrature)
    bound = conditional_holevo(state, homodyne_condition(state, 1, quadrature))
    report = KeyRateReport.build(
        p_success=success_probability(src, sub),
        mutual_info=mi,
        holevo=bound.holevo,
        eig_unconditional=bound.eig_unconditional,
        eig_conditional=bound.eig_conditional,
        beta=beta,
    )
    logger.debug("one-way rate t=%g k=%d: K=%.6g", ch.t, sub.k, report.k_ps)
    return report
