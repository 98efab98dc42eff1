"""
Exception types
~~~~~~~~~~~~~~~

Every error raised on purpose by the engine derives from :class:`CVQKDError`.
Validation errors also derive from ``ValueError`` so callers that only know
the standard library can still catch them.
"""

from typing import Optional, Sequence


class CVQKDError(Exception):
    """Base class for all engine errors"""


class ContractViolation(CVQKDError, ValueError):
    """An argument broke a documented precondition"""


class UnphysicalStateError(CVQKDError):
    """A covariance matrix violated the uncertainty principle"""

    def __init__(self, message: str, spectrum: Optional[Sequence[float]] = None):
        self.spectrum = list(spectrum) if spectrum is not None else []
        if self.spectrum:
            message = f"{message} (spectrum: {', '.join(f'{v:.12g}' for v in self.spectrum)})"
        super().__init__(message)


class DegenerateEstimatorError(CVQKDError):
    """Bob's estimator quadrature has (numerically) zero variance"""


class TruncationError(CVQKDError):
    """A Fock-basis series did not converge before the hard cap"""


class ConfigError(CVQKDError, ValueError):
    """Invalid run configuration"""

    def __init__(self, message: str, key: Optional[str] = None, line: Optional[int] = None):
        self.key = key
        self.line = line
        where = []
        if key is not None:
            where.append(f"key '{key}'")
        if line is not None:
            where.append(f"line {line}")
        if where:
            message = f"{' at '.join(where)}: {message}"
        super().__init__(message)


class AccuracyWarning(UserWarning):
    """A numerical result may miss its accuracy target (coarse grid, capped search)"""
