"""
Exception hierarchy for the IRWA toolkit.
"""

from typing import Optional


class IRWAError(Exception):
    """Root of every error raised by the toolkit."""


class ConfigError(IRWAError):
    """Invalid sweep or file configuration."""


class EigensolverError(IRWAError):
    """Hermitian eigensolver failed to converge."""

    def __init__(self, dim: int, reason: str = ""):
        self.dim = dim
        message = f"Eigensolver did not converge for a {dim}x{dim} matrix"
        if reason:
            message = f"{message}: {reason}"
        super().__init__(message)


class DimensionMismatchError(IRWAError, ValueError):
    """Operator dimension does not fit its slot or space."""


class PolicyResolutionError(IRWAError):
    """Cutoff policy cannot produce a positive width at this point."""


class ConvergenceError(IRWAError):
    """Truncation cap reached before the spectrum converged."""

    def __init__(self, n_max: int, last_delta: float):
        self.n_max = n_max
        self.last_delta = last_delta
        super().__init__(
            f"Spectrum not converged at n_max={n_max} (last delta {last_delta:.3e})"
        )


class DegeneracyError(IRWAError):
    """Vanishing zeroth-order denominator in non-degenerate perturbation theory."""


class SingularDetuningError(IRWAError):
    """Dispersive expressions requested at zero detuning."""


class TrackingAmbiguityError(IRWAError):
    """Adiabatic level assignment could not be made unambiguously."""

    def __init__(self, message: str, step: Optional[int] = None):
        self.step = step
        super().__init__(message)
