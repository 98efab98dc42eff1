"""
Two-way entanglement-based scheme: global state assembly, Bob's linear
estimator and the key-rate evaluation.
"""

import logging
import math
from typing import List, NamedTuple, Tuple

import numpy as np

from ..errors import ContractViolation, DegenerateEstimatorError, UnphysicalStateError
from ..gaussian import (
    CovarianceMatrix,
    Quadrature,
    SymplecticTransform,
    apply_symplectic,
    as_covariance,
    beam_splitter_symplectic,
    g_entropy,
    heterodyne_split,
    homodyne_condition,
    symplectic_eigenvalues,
)
from ..gaussian.core import PHYSICAL_ATOL, PINV_CUTOFF, quadrature_offset
from ..sources import subtracted_covariance, success_probability
from .channel import entangling_cloner_apply
from .config import Conditioning, ProtocolConfig
from .report import KeyRateReport

logger = logging.getLogger(__name__)

# mode order of the assembled state
B1, B5, A1, A5 = 0, 1, 2, 3


def assemble_two_way_state(cfg: ProtocolConfig) -> CovarianceMatrix:
    """
    Global covariance over (B1, B5, A1, A5).

    Bob keeps B1 and sends B4 through the forward channel (B3). Alice mixes
    her sent arm A4 with B3 on a splitter of transmittance t_a: A4 is
    transmitted into the backward channel, B3 reflected into A5. The
    backward channel output is B5.
    """
    bob = subtracted_covariance(cfg.bob_src, cfg.bob_sub).to_covariance()
    alice = subtracted_covariance(cfg.alice_src, cfg.alice_sub).to_covariance()

    # working order: B1, B4, A1, A4
    state = bob.direct_sum(alice)
    state = entangling_cloner_apply(state, 1, cfg.forward)
    state = apply_symplectic(state, beam_splitter_symplectic(cfg.t_a, 3, 1, 4))
    # index 3 now heads to Bob, index 1 is A5
    state = entangling_cloner_apply(state, 3, cfg.backward)
    return state.permute([B1, 3, A1, 1])


def estimator_mu(coupling: float, t1: float, t2: float, v_b1: float, v_b4: float) -> float:
    """
    mu = sqrt(2 * coupling * t1 * t2 * (V_B4 - 1) / (V_B1 + 1))

    ``coupling`` is the power fraction of Bob's forward mode that reaches B5
    through Alice's splitter, 1 - t_a.
    """
    if not v_b1 > -1.0:
        raise ContractViolation(f"V_B1 must exceed -1, got {v_b1}")
    numerator = 2.0 * coupling * t1 * t2 * max(0.0, v_b4 - 1.0)
    return math.sqrt(max(0.0, numerator / (v_b1 + 1.0)))


def optimal_mu(cfg: ProtocolConfig, assembled: CovarianceMatrix) -> float:
    if cfg.explicit_mu is not None:
        return cfg.explicit_mu
    bob = subtracted_covariance(cfg.bob_src, cfg.bob_sub)
    return estimator_mu(
        1.0 - cfg.t_a,
        cfg.forward.t,
        cfg.backward.t,
        assembled.variance(B1),
        bob.v2,
    )


def gamma_mu_transform(
    gamma: CovarianceMatrix,
    mu: float,
    quadrature: Quadrature = "x",
    reference_mode: int = B1,
    signal_mode: int = B5,
) -> CovarianceMatrix:
    """
    Bob's estimator as a symplectic shear.

    x basis: x_sig -> x_sig - mu x_ref, p_ref -> p_ref + mu p_sig.
    p basis: p_sig -> p_sig - mu p_ref, x_ref -> x_ref + mu x_sig.
    """
    gamma = as_covariance(gamma)
    n = gamma.n_modes
    for mode in (reference_mode, signal_mode):
        if not 0 <= mode < n:
            raise ContractViolation(f"mode index {mode} out of range for {n} modes")
    if reference_mode == signal_mode:
        raise ContractViolation("estimator needs two distinct modes")
    q = quadrature_offset(quadrature)
    other = 1 - q

    s = np.eye(2 * n)
    s[2 * signal_mode + q, 2 * reference_mode + q] = -mu
    s[2 * reference_mode + other, 2 * signal_mode + other] = mu
    return apply_symplectic(gamma, SymplecticTransform(s))


def gaussian_mutual_information(v_a: float, v_b: float, c: float) -> float:
    """I = 1/2 log2((V_A + 1) / (V_A - C^2/V_B + 1)), Alice heterodyning"""
    if v_b <= PINV_CUTOFF:
        raise DegenerateEstimatorError(f"estimator variance {v_b:.3e} is degenerate")
    return 0.5 * math.log2((v_a + 1.0) / (v_a - c * c / v_b + 1.0))


def mutual_information(
    gamma: CovarianceMatrix,
    estimator_mode: int = B5,
    alice_mode: int = A1,
    quadrature: Quadrature = "x",
) -> float:
    """Mutual information between Alice's heterodyne on A1 and Bob's estimator quadrature"""
    return gaussian_mutual_information(
        gamma.variance(alice_mode, quadrature),
        gamma.variance(estimator_mode, quadrature),
        gamma.covariance(alice_mode, estimator_mode, quadrature),
    )


class HolevoBound(NamedTuple):
    holevo: float
    eig_unconditional: List[float]
    eig_conditional: List[float]


def conditional_holevo(
    unconditional: CovarianceMatrix, conditional: CovarianceMatrix
) -> HolevoBound:
    """S(unconditional) - S(conditional), both purified by Eve"""
    eig_u = symplectic_eigenvalues(unconditional)
    eig_c = symplectic_eigenvalues(conditional)
    try:
        s_u = sum(g_entropy(nu) for nu in eig_u)
    except UnphysicalStateError as exc:
        raise UnphysicalStateError("unconditional state is unphysical", eig_u) from exc
    try:
        s_c = sum(g_entropy(nu) for nu in eig_c)
    except UnphysicalStateError as exc:
        raise UnphysicalStateError("conditional state is unphysical", eig_c) from exc

    holevo = s_u - s_c
    if holevo < -PHYSICAL_ATOL:
        raise UnphysicalStateError(
            f"conditioning increased the entropy by {-holevo:.3e} bits", eig_u + eig_c
        )
    return HolevoBound(max(0.0, holevo), eig_u, eig_c)


def estimator_state(
    assembled: CovarianceMatrix,
    mu: float,
    quadrature: Quadrature = "x",
    conditioning: Conditioning = Conditioning.HETERODYNE,
) -> Tuple[CovarianceMatrix, int]:
    """
    State after Bob's estimator, and the index of the estimator mode.

    The sign of mu follows the correlation between reference and signal
    quadratures, so a non-negative ``mu`` always reduces the noise on B5.
    """
    conditioning = Conditioning(conditioning)
    if conditioning is Conditioning.HETERODYNE:
        state = heterodyne_split(assembled, B1)
        # x reading stays on B1, p reading on the appended mode
        reference = B1 if quadrature == "x" else state.n_modes - 1
    else:
        state = assembled
        reference = B1
    signed = mu if state.covariance(reference, B5, quadrature) >= 0 else -mu
    return gamma_mu_transform(state, signed, quadrature, reference, B5), B5


def holevo_bound(
    assembled: CovarianceMatrix,
    mu: float,
    quadrature: Quadrature = "x",
    conditioning: Conditioning = Conditioning.HETERODYNE,
) -> HolevoBound:
    """
    Eve's information on Bob's estimator quadrature.

    The unconditional spectrum is that of the 4-mode state; the conditional
    one comes from homodyning the estimator (4 modes left for ``heterodyne``
    conditioning, 3 for ``mode``).
    """
    assembled = as_covariance(assembled)
    state, est = estimator_state(assembled, mu, quadrature, conditioning)
    conditional = homodyne_condition(state, est, quadrature)
    return conditional_holevo(assembled, conditional)


def two_way_key_rate(cfg: ProtocolConfig, quadrature: Quadrature = "x") -> KeyRateReport:
    """K_PS = P_A P_B (beta I(A:B) - S(E:B))"""
    assembled = assemble_two_way_state(cfg)
    mu = optimal_mu(cfg, assembled)
    state, est = estimator_state(assembled, mu, quadrature, cfg.conditioning)
    mi = mutual_information(state, est, A1, quadrature)
    bound = conditional_holevo(assembled, homodyne_condition(state, est, quadrature))
    p = success_probability(cfg.alice_src, cfg.alice_sub) * success_probability(cfg.bob_src, cfg.bob_sub)

    report = KeyRateReport.build(
        p_success=p,
        mutual_info=mi,
        holevo=bound.holevo,
        eig_unconditional=bound.eig_unconditional,
        eig_conditional=bound.eig_conditional,
        beta=cfg.beta,
        mu=mu,
    )
    logger.debug(
        "two-way rate t1=%g t2=%g kA=%d kB=%d: I=%.6g S=%.6g P=%.6g K=%.6g",
        cfg.forward.t, cfg.backward.t, cfg.alice_sub.k, cfg.bob_sub.k,
        mi, bound.holevo, p, report.k_ps,
    )
    return report
