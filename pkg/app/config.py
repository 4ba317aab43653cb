"""
Configuration module for the IRWA toolkit.

Handles:
- Numerical defaults (tolerances, truncation schedule, regime thresholds)
- Loading flat key=value config files for the command-line front end
"""

from pathlib import Path
from typing import Dict, Optional, Union

from dotenv import dotenv_values

from .errors import ConfigError


class Config:
    """Central configuration for the toolkit."""

    # Linear algebra
    HERMITIAN_TOL: float = 1e-12
    UNITARY_TOL: float = 1e-10

    # Fock-space truncation schedule for converged spectra
    FOCK_START: int = 20
    FOCK_STEP: int = 10
    FOCK_CAP: int = 200
    CONVERGENCE_TOL: float = 1e-8

    # "Much less than" ratios
    COUPLING_RATIO: float = 0.1
    SCALE_RATIO: float = 1.0

    # Regime warnings
    DISPERSIVE_THRESHOLD: float = 0.1
    NEAR_RESONANCE_THRESHOLD: float = 0.1

    # Level tracking and perturbation theory
    TIE_THRESHOLD: float = 1e-6
    DEGENERACY_THRESHOLD: float = 1e-9
    ORACLE_SWEEP_STEPS: int = 11

    # Output
    CSV_DIGITS: int = 12
    LOG_LEVEL: str = "INFO"

    @classmethod
    def validate(cls) -> None:
        """Validate configuration consistency."""
        if cls.FOCK_START < 1 or cls.FOCK_STEP < 1:
            raise ConfigError("FOCK_START and FOCK_STEP must be positive")

        if cls.FOCK_CAP < cls.FOCK_START:
            raise ConfigError("FOCK_CAP must not be below FOCK_START")

        if not 0 < cls.COUPLING_RATIO <= 1 or cls.SCALE_RATIO <= 0:
            raise ConfigError("ratio thresholds must be positive (coupling ratio at most 1)")

        if cls.ORACLE_SWEEP_STEPS < 2:
            raise ConfigError("ORACLE_SWEEP_STEPS must be at least 2")


def load_config_file(path: Union[str, Path]) -> Dict[str, Optional[str]]:
    """
    Read a flat key=value config file.

    Keys are normalised to lower case with dashes turned into underscores so
    that `g-min=0.1` and `G_MIN=0.1` both map onto the `g_min` flag.

    Args:
        path: Path to the config file

    Returns:
        Dict of raw string values
    """
    path = Path(path)
    if not path.is_file():
        raise ConfigError(f"Config file not found: {path}")

    values = dotenv_values(path)
    return {key.strip().lower().replace("-", "_"): value for key, value in values.items()}
