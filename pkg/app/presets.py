"""
Named sweep presets reproducing the data behind each published figure.

Preset values use the same keys as the command-line flags (dashes replaced by
underscores) so that a config file or explicit flag can override any of them.
"""

import logging
import math
from typing import Any, Dict

from .errors import ConfigError

logger = logging.getLogger(__name__)

_ISWAP_G = 0.02
_ISWAP_DELTA = 0.2

PRESETS: Dict[str, Dict[str, Any]] = {
    # Coupling ratio g_ar / g_r; the g = 0 row has no defined ratio
    "fig1": {
        "command": "cutoff",
        "sweep": "g",
        "g_min": 0.0,
        "g_max": 0.1,
        "g_steps": 101,
        "delta_policy": "fixed:0.01",
        "cutoff_policy": "factor_of_g:10",
        "allow_flagged": True,
    },
    # Low-lying spectrum on resonance
    "fig2": {
        "command": "spectrum",
        "sweep": "g",
        "g_min": 0.0,
        "g_max": 0.3,
        "g_steps": 61,
        "delta_policy": "fixed:0",
        "cutoff_policy": "factor_of_g:10",
        "levels": 4,
    },
    # Resonator shift against coupling, positive and negative detuning
    "fig3a": {
        "command": "dispersive",
        "sweep": "g",
        "g_min": 0.001,
        "g_max": 0.1,
        "g_steps": 100,
        "delta_policy": "factor:10",
        "cutoff_policy": "factor_of_detuning:10",
    },
    "fig3b": {
        "command": "dispersive",
        "sweep": "g",
        "g_min": 0.001,
        "g_max": 0.1,
        "g_steps": 100,
        "delta_policy": "factor:-10",
        "cutoff_policy": "factor_of_detuning:10",
    },
    # Resonator shift against detuning at g = 0.1
    "fig4a": {
        "command": "dispersive",
        "sweep": "delta",
        "g": 0.1,
        "g_min": 0.2,
        "g_max": 1.0,
        "g_steps": 81,
        "cutoff_policy": "factor_of_detuning:10",
    },
    "fig4b": {
        "command": "dispersive",
        "sweep": "delta",
        "g": 0.1,
        "g_min": -1.0,
        "g_max": -0.2,
        "g_steps": 81,
        "cutoff_policy": "factor_of_detuning:10",
    },
    # Two-qubit effective couplings
    "fig5a": {
        "command": "twoqubit",
        "sweep": "g",
        "g_min": 0.001,
        "g_max": 0.1,
        "g_steps": 100,
        "delta_policy": "factor:10",
        "cutoff_policy": "factor_of_detuning:10",
    },
    "fig5b": {
        "command": "twoqubit",
        "sweep": "g",
        "g_min": 0.001,
        "g_max": 0.1,
        "g_steps": 100,
        "delta_policy": "factor:-10",
        "cutoff_policy": "factor_of_detuning:10",
    },
    # RWA two-qubit evolution up to the sqrt(iSWAP) time pi Delta / (4 g^2)
    "iswap": {
        "command": "evolve",
        "sweep": "t",
        "g": _ISWAP_G,
        "delta_policy": f"fixed:{_ISWAP_DELTA}",
        "g_min": 0.0,
        "g_max": math.pi * _ISWAP_DELTA / (4 * _ISWAP_G ** 2),
        "g_steps": 11,
        "variant": "rwa",
    },
}


def get_preset(name: str) -> Dict[str, Any]:
    """
    Look up a preset by name.

    Raises:
        ConfigError: unknown preset name
    """
    try:
        preset = dict(PRESETS[name])
    except KeyError:
        raise ConfigError(
            f"Unknown preset {name!r}; available: {', '.join(sorted(PRESETS))}"
        ) from None
    logger.info(f"Using preset {name}: {preset}")
    return preset
