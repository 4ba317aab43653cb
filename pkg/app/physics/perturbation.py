"""
Near-resonance IRWA: second-order energy corrections from the time-averaged
counter-rotating term g_ar Y+ on top of the time-averaged Jaynes-Cummings
eigenbasis.

Doublet n mixes |e,n> and |g,n+1>, so E(0)_{n,±} carries sqrt(n+1). Y+ moves
|e,n> to |g,n-1> and |g,n+1> to |e,n+2>, hence only levels two doublets away
(or the ground state) enter the second-order sums. First-order corrections
vanish identically.
"""

import logging
import math
from typing import List, Optional, Tuple

import numpy as np

from ..config import Config
from ..errors import DegeneracyError
from ..models import CouplingPair, CutoffPolicy, DressedLabel, PerturbedLevel, SystemParams
from .averaging import averaged_couplings
from .hamiltonians import build_from_couplings
from .numerics import eig_hermitian
from .quantize import CompositeSpace, rotating_ops
from .spectra import candidate_labels, dressed_state, mixing_angle

logger = logging.getLogger(__name__)


def jc_level(label: DressedLabel, p: SystemParams, couplings: CouplingPair) -> float:
    """Zeroth-order (time-averaged JC) energy of a dressed level."""
    if label.kind == "ground":
        return -0.5 * p.omega_a

    n = label.n
    root = math.sqrt(p.delta ** 2 + 4.0 * couplings.g_r ** 2 * (n + 1))
    sign = 1.0 if label.sign == "+" else -1.0
    return (n + 0.5) * p.omega_r + sign * 0.5 * root


def _amplitudes(n: int, p: SystemParams, couplings: CouplingPair) -> Tuple[float, float]:
    angle = mixing_angle(n, p.delta, couplings.g_r)
    return angle.cos_half, angle.sin_half


class _Sums:
    """Second-order channel sums for one level."""

    def __init__(self, label: DressedLabel, p: SystemParams, couplings: CouplingPair):
        self.p = p
        self.couplings = couplings
        self.energy = jc_level(label, p, couplings)

    def _term(self, weight: float, other: DressedLabel) -> float:
        gap = self.energy - jc_level(other, self.p, self.couplings)
        if abs(gap) < Config.DEGENERACY_THRESHOLD:
            raise DegeneracyError(
                f"Zeroth-order levels are degenerate (gap {gap:.3e}) with {other.name}"
            )
        return weight / gap

    def ground(self, weight: float) -> float:
        return self._term(weight, DressedLabel.ground())

    def via_excited(self, m: int, weight: float) -> float:
        """Into doublet m through its |e,m> component."""
        c, s = _amplitudes(m, self.p, self.couplings)
        return self._term(weight * c * c, DressedLabel.doublet(m, "+")) + self._term(
            weight * s * s, DressedLabel.doublet(m, "-")
        )

    def via_lower(self, m: int, weight: float) -> float:
        """Into doublet m through its |g,m+1> component."""
        c, s = _amplitudes(m, self.p, self.couplings)
        return self._term(weight * s * s, DressedLabel.doublet(m, "+")) + self._term(
            weight * c * c, DressedLabel.doublet(m, "-")
        )


def second_order(label: DressedLabel, p: SystemParams, couplings: CouplingPair) -> float:
    """
    Second-order correction E(2) of a dressed level.

    C_n and S_n are the amplitudes of |e,n> and |g,n+1> in |n,+>
    (|n,-> = -S_n |e,n> + C_n |g,n+1>).

    Raises:
        DegeneracyError: a zeroth-order denominator vanishes
    """
    g_ar2 = couplings.g_ar ** 2
    if g_ar2 == 0:
        return 0.0

    sums = _Sums(label, p, couplings)

    if label.kind == "ground":
        return sums.via_excited(1, g_ar2)

    n = label.n
    c, s = _amplitudes(n, p, couplings)
    excited_amp, lower_amp = (c, s) if label.sign == "+" else (s, c)

    if n == 0:
        return sums.via_excited(2, 2 * g_ar2 * lower_amp ** 2)

    if n == 1:
        return sums.ground(g_ar2 * excited_amp ** 2) + sums.via_excited(
            3, 3 * g_ar2 * lower_amp ** 2
        )

    return sums.via_lower(n - 2, n * g_ar2 * excited_amp ** 2) + sums.via_excited(
        n + 2, (n + 2) * g_ar2 * lower_amp ** 2
    )


def brute_force_second_order(
    label: DressedLabel,
    p: SystemParams,
    couplings: CouplingPair,
    n_max: Optional[int] = None,
) -> float:
    """
    Rayleigh-Schrodinger sum over the numerically diagonalized JC eigenbasis.

    sum_m |<m| g_ar Y+ |label>|^2 / (E_label - E_m)
    """
    if n_max is None:
        n_max = (label.n or 0) + 12
    space = CompositeSpace.single(n_max)

    jc = build_from_couplings(p, CouplingPair(g_r=couplings.g_r, g_ar=0.0), space)
    system = eig_hermitian(jc)

    reference = dressed_state(label, p, couplings, space)
    index = int(np.argmax(np.abs(system.vectors.conj().T @ reference)))
    psi = system.vectors[:, index]
    energy = system.values[index]

    _, _, y_plus, _ = rotating_ops(space, 0)
    amplitudes = system.vectors.conj().T @ (couplings.g_ar * (y_plus @ psi))

    total = 0.0
    for m, amp in enumerate(amplitudes):
        weight = abs(amp) ** 2
        if m == index or weight < 1e-28:
            continue
        gap = energy - system.values[m]
        if abs(gap) < Config.DEGENERACY_THRESHOLD:
            raise DegeneracyError(f"Level {label.name} couples to a degenerate state")
        total += weight / gap
    return float(total)


def perturbed_spectrum(
    p: SystemParams, policy: CutoffPolicy, k_levels: int
) -> List[PerturbedLevel]:
    """
    Lowest k_levels of the time-averaged Rabi model in second-order IRWA.

    Returns:
        Levels ordered by total energy
    """
    if abs(p.delta) > Config.NEAR_RESONANCE_THRESHOLD * p.omega_r:
        logger.warning(
            f"Perturbative IRWA requested at detuning {p.delta:g}, "
            f"beyond the near-resonance threshold {Config.NEAR_RESONANCE_THRESHOLD:g}"
        )

    couplings = averaged_couplings(p, policy)
    levels = [
        PerturbedLevel(
            label=label,
            e0=jc_level(label, p, couplings),
            e2=second_order(label, p, couplings),
        )
        for label in candidate_labels(k_levels)
    ]
    levels.sort(key=lambda level: level.total)
    return levels[:k_levels]
