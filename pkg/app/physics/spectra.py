"""
Exact spectra on the truncated space.

Provides diagonalization with truncation convergence control and adiabatic
level tracking across coupling sweeps. Level identity between neighbouring
sweep points follows the largest eigenvector overlap, so labels survive level
crossings.
"""

import logging
import math
from dataclasses import dataclass
from typing import Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np

from ..config import Config
from ..errors import ConvergenceError
from ..models import (
    CouplingPair,
    CutoffPolicy,
    DressedAngle,
    DressedLabel,
    ModelKind,
    SystemParams,
    TrackedLevel,
    TrackedSpectrum,
    TrackingAmbiguity,
)
from .hamiltonians import build_hamiltonian, couplings_for_kind
from .numerics import EigenSystem, HermitianOperator, eig_hermitian
from .quantize import CompositeSpace

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class ConvergedSpectrum:
    """Eigensystem at the smallest truncation that agrees with the next one."""

    system: EigenSystem
    n_max: int
    delta: float


def converged_spectrum(
    builder: Callable[[int], HermitianOperator],
    k_levels: int,
    tol: Optional[float] = None,
) -> ConvergedSpectrum:
    """
    Grow the Fock truncation until the lowest k_levels eigenvalues settle.

    n_max starts at Config.FOCK_START and grows by Config.FOCK_STEP up to
    Config.FOCK_CAP. The returned system is the truncation whose lowest
    k_levels eigenvalues differ from the next truncation by less than tol.

    Raises:
        ConvergenceError: cap reached, carrying the last delta
    """
    if k_levels < 1:
        raise ValueError("k_levels must be at least 1")
    tol = Config.CONVERGENCE_TOL if tol is None else tol
    if tol <= 0:
        raise ValueError("tol must be positive")

    n_max = Config.FOCK_START
    current = eig_hermitian(builder(n_max))
    if math.isinf(tol):
        return ConvergedSpectrum(system=current, n_max=n_max, delta=math.inf)

    delta = math.inf
    while n_max + Config.FOCK_STEP <= Config.FOCK_CAP:
        n_next = n_max + Config.FOCK_STEP
        following = eig_hermitian(builder(n_next))
        k = min(k_levels, current.values.size)
        delta = float(np.max(np.abs(following.values[:k] - current.values[:k])))
        logger.debug(f"Truncation {n_max} -> {n_next}: delta {delta:.3e}")

        if delta < tol:
            return ConvergedSpectrum(system=current, n_max=n_max, delta=delta)
        n_max, current = n_next, following

    raise ConvergenceError(n_max=n_max, last_delta=delta)


def mixing_angle(n: int, delta: float, g_r: float) -> DressedAngle:
    """Doublet mixing angle; pi/2 exactly on resonance."""
    if delta == 0:
        return DressedAngle(n=n, theta_n=math.pi / 2)
    return DressedAngle(n=n, theta_n=math.atan2(2.0 * g_r * math.sqrt(n + 1), delta))


def dressed_state(
    label: DressedLabel, p: SystemParams, couplings: CouplingPair, space: CompositeSpace
) -> np.ndarray:
    """
    Jaynes-Cummings eigenvector for a label, built from the mixing angle.

    |n,+> =  C |e,n> + S |g,n+1>
    |n,-> = -S |e,n> + C |g,n+1>
    with C = cos(theta_n / 2), S = sin(theta_n / 2).
    """
    if label.kind == "ground":
        return space.basis_state("g", 0)

    angle = mixing_angle(label.n, p.delta, couplings.g_r)
    c, s = angle.cos_half, angle.sin_half
    excited = space.basis_state("e", label.n)
    lower = space.basis_state("g", label.n + 1)
    if label.sign == "+":
        return c * excited + s * lower
    return -s * excited + c * lower


def candidate_labels(k_levels: int) -> List[DressedLabel]:
    """Ground plus enough doublets to cover the k lowest free levels."""
    labels = [DressedLabel.ground()]
    for n in range(k_levels + 1):
        labels.append(DressedLabel.doublet(n, "-"))
        labels.append(DressedLabel.doublet(n, "+"))
    return labels


def _assign(
    previous: Sequence[np.ndarray],
    vectors: np.ndarray,
    energies: np.ndarray,
) -> Tuple[List[int], List[Tuple[int, float]]]:
    """
    Greedy maximum-overlap assignment of previous vectors onto eigenvectors.

    Returns:
        Chosen column per previous vector, and (position, energy gap) for
        every assignment decided by energy order
    """
    overlaps = np.abs(np.array([vectors.conj().T @ v for v in previous]))
    order = sorted(range(len(previous)), key=lambda i: -float(np.max(overlaps[i])))

    taken: set = set()
    chosen: List[int] = [0] * len(previous)
    ties: List[Tuple[int, float]] = []
    for i in order:
        free = [m for m in range(vectors.shape[1]) if m not in taken]
        best = max(free, key=lambda m: overlaps[i, m])
        tied = [m for m in free if overlaps[i, best] - overlaps[i, m] < Config.TIE_THRESHOLD]
        if len(tied) > 1:
            best = min(tied, key=lambda m: energies[m])
            gap = float(max(energies[m] for m in tied) - min(energies[m] for m in tied))
            ties.append((i, gap))
        taken.add(best)
        chosen[i] = best
    return chosen, ties


def _point_builder(kind: ModelKind, p: SystemParams, policy: CutoffPolicy):
    return lambda n: build_hamiltonian(kind, p, policy, CompositeSpace.single(n))


def track_levels(
    sweep: Sequence[SystemParams],
    kind: ModelKind,
    policy: CutoffPolicy,
    k_levels: int,
    n_max: Optional[int] = None,
    labels: Optional[Sequence[DressedLabel]] = None,
) -> TrackedSpectrum:
    """
    Follow the k_levels lowest dressed levels across a coupling sweep.

    Labels are seeded at the smallest coupling from the Jaynes-Cummings dressed
    states; the sweep is always processed in increasing g, so reversing the
    input order reverses the output without changing any assignment.

    Args:
        sweep: Parameter points
        kind: Model kind
        policy: Cutoff policy
        k_levels: Number of levels to follow
        n_max: Fixed truncation; chosen by convergence over the sweep when None
        labels: Follow exactly these levels instead of the k_levels lowest

    Returns:
        TrackedSpectrum in the input order
    """
    if not sweep:
        raise ValueError("sweep must not be empty")
    if k_levels < 1:
        raise ValueError("k_levels must be at least 1")

    if labels:
        top = max((label.n for label in labels if label.kind == "doublet"), default=0)
        pool = max(2 * k_levels, 2 * top) + 6
    else:
        pool = 2 * k_levels + 4
    if n_max is None:
        n_max = max(
            converged_spectrum(_point_builder(kind, p, policy), pool).n_max for p in sweep
        )
    space = CompositeSpace.single(n_max)
    pool = min(pool, space.dim)

    order = sorted(range(len(sweep)), key=lambda i: sweep[i].g)
    energies: Dict[DressedLabel, List[float]] = {}
    ambiguities: List[TrackingAmbiguity] = []

    # Seed
    first = sweep[order[0]]
    couplings = couplings_for_kind(kind, first, policy)
    h = build_hamiltonian(kind, first, policy, space)
    candidates = list(labels) if labels else candidate_labels(k_levels)
    references = [dressed_state(label, first, couplings, space) for label in candidates]

    if couplings.g_r == 0 and couplings.g_ar == 0:
        vectors = references
        seed_energies = [float(np.real(v.conj() @ h.matrix @ v)) for v in vectors]
    else:
        system = eig_hermitian(h)
        chosen, ties = _assign(references, system.vectors[:, :pool], system.values[:pool])
        vectors = [system.vectors[:, m] for m in chosen]
        seed_energies = [float(system.values[m]) for m in chosen]
        for i, gap in ties:
            ambiguities.append(
                TrackingAmbiguity(step=order[0], label=candidates[i], energy_gap=gap)
            )

    if labels:
        ranked = list(range(len(candidates)))
    else:
        ranked = sorted(range(len(candidates)), key=lambda i: (seed_energies[i], i))[:k_levels]
    tracked = [candidates[i] for i in ranked]
    previous = [vectors[i] for i in ranked]
    per_step: Dict[int, List[float]] = {order[0]: [seed_energies[i] for i in ranked]}

    for index in order[1:]:
        p = sweep[index]
        system = eig_hermitian(build_hamiltonian(kind, p, policy, space))
        chosen, ties = _assign(previous, system.vectors[:, :pool], system.values[:pool])
        for i, gap in ties:
            logger.warning(
                f"Overlap tie for level {tracked[i].name} at g={p.g:g}; resolved by energy order"
            )
            ambiguities.append(TrackingAmbiguity(step=index, label=tracked[i], energy_gap=gap))
        previous = [system.vectors[:, m] for m in chosen]
        per_step[index] = [float(system.values[m]) for m in chosen]

    for position, label in enumerate(tracked):
        energies[label] = [per_step[i][position] for i in range(len(sweep))]

    return TrackedSpectrum(
        sweep_values=[p.g / p.omega_r for p in sweep],
        levels=[TrackedLevel(label=label, energies=energies[label]) for label in tracked],
        n_max=n_max,
        ambiguities=ambiguities,
    )
