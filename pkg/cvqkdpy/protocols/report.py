from dataclasses import asdict, dataclass
from typing import Dict, Tuple


@dataclass(frozen=True)
class KeyRateReport:
    """
    One key-rate evaluation, fully decomposed.

    k_s = beta * mutual_info - holevo is the rate of the kept data,
    k_ps = p_success * k_s the rate per protocol use.
    """

    p_success: float
    mutual_info: float
    holevo: float
    eig_unconditional: Tuple[float, ...]
    eig_conditional: Tuple[float, ...]
    k_s: float
    k_ps: float
    beta: float
    mu: float = 0.0

    @classmethod
    def build(cls, p_success, mutual_info, holevo, eig_unconditional, eig_conditional, beta, mu=0.0):
        k_s = beta * mutual_info - holevo
        return cls(
            p_success=float(p_success),
            mutual_info=float(mutual_info),
            holevo=float(holevo),
            eig_unconditional=tuple(float(v) for v in eig_unconditional),
            eig_conditional=tuple(float(v) for v in eig_conditional),
            k_s=float(k_s),
            k_ps=float(p_success * k_s),
            beta=float(beta),
            mu=float(mu),
        )

    def recomputed_rate(self) -> float:
        return self.p_success * (self.beta * self.mutual_info - self.holevo)

    @property
    def positive(self) -> bool:
        return self.k_ps > 0.0

    def to_dict(self) -> Dict:
        out = asdict(self)
        out["eig_unconditional"] = list(self.eig_unconditional)
        out["eig_conditional"] = list(self.eig_conditional)
        return out
