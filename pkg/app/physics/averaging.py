"""
Time-averaging kernels, cutoff functions and time-averaged couplings.

The averaging kernel has temporal width tau = 1 / omega_K. Its Fourier
transform K(omega) weights each interaction term by its oscillation frequency:
co-rotating terms oscillate at Delta, counter-rotating terms at Sigma.
"""

import logging
import math
from typing import Callable, Dict, Optional

from ..config import Config
from ..errors import PolicyResolutionError
from ..models import (
    AveragingKernel,
    CouplingPair,
    CutoffMode,
    CutoffPolicy,
    KernelFamily,
    RegimeReport,
    SystemParams,
)

logger = logging.getLogger(__name__)


def _gaussian(omega: float, omega_K: float) -> float:
    # Fourier transform of exp(-t^2 / 2 tau^2) / (tau sqrt(2 pi)) with tau = 1 / omega_K
    return math.exp(-(omega * omega) / (2.0 * omega_K * omega_K))


# Every entry must be even in omega and equal 1 at omega = 0
CUTOFF_FUNCTIONS: Dict[KernelFamily, Callable[[float, float], float]] = {
    KernelFamily.GAUSSIAN: _gaussian,
}


def cutoff(kernel: AveragingKernel, omega: float) -> float:
    """Evaluate the cutoff function K(omega) of a kernel."""
    return CUTOFF_FUNCTIONS[kernel.family](omega, kernel.omega_K)


def resolve_width(p: SystemParams, policy: CutoffPolicy) -> float:
    """
    Cutoff width omega_K selected by a policy at one parameter point.

    Raises:
        PolicyResolutionError: the policy scales a quantity that vanishes here
    """
    if policy.mode == CutoffMode.FIXED:
        return policy.value

    if policy.mode == CutoffMode.FACTOR_OF_G:
        if p.g <= 0:
            raise PolicyResolutionError("factor_of_g cutoff is undefined at g = 0")
        return policy.value * p.g

    if p.delta == 0:
        raise PolicyResolutionError("factor_of_detuning cutoff is undefined at zero detuning")
    return policy.value * abs(p.delta)


def averaged_couplings(
    p: SystemParams,
    policy: CutoffPolicy,
    family: KernelFamily = KernelFamily.GAUSSIAN,
) -> CouplingPair:
    """
    Time-averaged couplings g_r = K(Delta) g and g_ar = K(Sigma) g.

    Args:
        p: System parameters
        policy: Cutoff width policy
        family: Kernel family

    Returns:
        CouplingPair
    """
    if p.g == 0:
        return CouplingPair(g_r=0.0, g_ar=0.0)

    kernel = AveragingKernel(family=family, omega_K=resolve_width(p, policy))
    return CouplingPair(
        g_r=cutoff(kernel, p.delta) * p.g,
        g_ar=cutoff(kernel, p.sigma) * p.g,
    )


def _much_less(a: float, b: float, ratio: float) -> bool:
    return a <= ratio * b


def regime_check(
    p: SystemParams,
    policy: CutoffPolicy,
    ratio: Optional[float] = None,
    scale_ratio: Optional[float] = None,
) -> RegimeReport:
    """
    Report which frequency-scale chains hold.

    "<<" between the coupling and a frequency means a <= ratio * b; between
    two frequency scales it means a <= scale_ratio * b.

    Chains:
        averaging:      g << omega_K
        rwa:            g << omega_K << min(omega_r, omega_a)
        dispersive-rwa: g << |Delta| << omega_K << Sigma
        ultrastrong:    g << |Delta| <= Sigma << omega_K
    """
    ratio = Config.COUPLING_RATIO if ratio is None else ratio
    scale_ratio = Config.SCALE_RATIO if scale_ratio is None else scale_ratio

    if p.g == 0:
        return RegimeReport(
            omega_K=None,
            ratio=ratio,
            averaging_condition=True,
            rwa_chain=True,
            dispersive_rwa_chain=True,
            ultrastrong_chain=True,
        )

    omega_K = resolve_width(p, policy)
    g, delta, sigma = p.g, abs(p.delta), p.sigma

    averaging = _much_less(g, omega_K, ratio)
    rwa = averaging and _much_less(omega_K, min(p.omega_r, p.omega_a), scale_ratio)
    dispersive = _much_less(g, delta, ratio)
    dispersive_rwa = (
        dispersive
        and _much_less(delta, omega_K, scale_ratio)
        and _much_less(omega_K, sigma, scale_ratio)
    )
    ultrastrong = dispersive and delta <= sigma and _much_less(sigma, omega_K, scale_ratio)

    report = RegimeReport(
        omega_K=omega_K,
        ratio=ratio,
        averaging_condition=averaging,
        rwa_chain=rwa,
        dispersive_rwa_chain=dispersive_rwa,
        ultrastrong_chain=ultrastrong,
    )
    logger.debug(f"Regime at g={g:g}, delta={p.delta:g}, omega_K={omega_K:g}: {report.regime}")
    return report
