import math
from typing import Union

import numpy as np
from scipy.special import gammaln, xlogy

from .specs import SourceSpec, SubtractionSpec, TwoModeCovariance

ArrayOrFloat = Union[float, np.ndarray]


def subtracted_covariance(src: SourceSpec, sub: SubtractionSpec) -> TwoModeCovariance:
    """
    Covariance of the k-photon virtually subtracted TMSV.

    V' = (k+1) / (1 - T lambda^2)
    V_1 = 2V' - 1,  C = 2 sqrt(T) lambda V',  V_2 = 2 T lambda^2 V' + 1
    """
    if not sub.enabled:
        return TwoModeCovariance(src.v, math.sqrt(src.v * src.v - 1.0), src.v)
    q = sub.t_ps * src.lambda_sq
    v_prime = (sub.k + 1) / (1.0 - q)
    return TwoModeCovariance(
        2.0 * v_prime - 1.0,
        2.0 * math.sqrt(sub.t_ps) * src.lambda_ * v_prime,
        2.0 * q * v_prime + 1.0,
    )


def success_probability(src: SourceSpec, sub: SubtractionSpec) -> float:
    """P_PS^k = (1 - l^2)/(1 - T l^2) * [l^2 (1 - T) / (1 - T l^2)]^k"""
    if not sub.enabled:
        return 1.0
    lam2, t = src.lambda_sq, sub.t_ps
    denom = 1.0 - t * lam2
    return (1.0 - lam2) / denom * (lam2 * (1.0 - t) / denom) ** sub.k


def probability_turning_point(src: SourceSpec, k: int) -> float:
    """T_PS above which P_PS^k decreases with T_PS (k >= 1)"""
    lam2 = src.lambda_sq
    if lam2 == 0.0:
        return 0.0
    return max(0.0, ((k + 1) * lam2 - k) / lam2)


def selection_probability(src: SourceSpec, sub: SubtractionSpec, x: ArrayOrFloat, p: ArrayOrFloat) -> ArrayOrFloat:
    """
    Probability of keeping a heterodyne outcome (x, p).

    The conditioned amplitude of the sent mode is alpha = lambda (x - ip) / sqrt(2);
    the subtraction port sees sqrt(1 - T) alpha and the weight is the Poisson
    probability of finding k photons there.
    """
    x = np.asarray(x, dtype=float)
    p = np.asarray(p, dtype=float)
    if not sub.enabled:
        out = np.ones(np.broadcast(x, p).shape)
        return float(out) if out.ndim == 0 else out
    beta_sq = (1.0 - sub.t_ps) * src.lambda_sq * (x * x + p * p) / 2.0
    out = np.exp(xlogy(sub.k, beta_sq) - beta_sq - gammaln(sub.k + 1))
    return float(out) if np.ndim(out) == 0 else out
