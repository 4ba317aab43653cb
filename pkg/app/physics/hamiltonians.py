"""
Qubit-resonator Hamiltonians: Jaynes-Cummings, quantum Rabi and the
time-averaged (IRWA) Rabi model, for one or several qubits.

    H = sum_j (omega_a^j / 2) sigma_z^j + omega_r a^dagger a
        + sum_j (g_r^j X+^j + g_ar^j Y+^j)

JC keeps only X+ with g_r = g; Rabi keeps both with g_r = g_ar = g.
"""

import logging
from typing import Sequence

from ..errors import DimensionMismatchError
from ..models import CouplingPair, CutoffPolicy, ModelKind, MultiQubitParams, SystemParams
from .averaging import averaged_couplings
from .numerics import HermitianOperator
from .quantize import CompositeSpace, number, embed, qubit_op, rotating_ops

logger = logging.getLogger(__name__)


def couplings_for_kind(kind: ModelKind, p: SystemParams, policy: CutoffPolicy) -> CouplingPair:
    """(g_r, g_ar) used by each model kind."""
    if kind == ModelKind.JC:
        return CouplingPair(g_r=p.g, g_ar=0.0)
    if kind == ModelKind.RABI:
        return CouplingPair(g_r=p.g, g_ar=p.g)
    return averaged_couplings(p, policy)


def _assemble(
    omega_r: float,
    omega_as: Sequence[float],
    couplings: Sequence[CouplingPair],
    space: CompositeSpace,
) -> HermitianOperator:
    h = omega_r * embed(number(space.fock), space.resonator, space)
    for j, (omega_a, pair) in enumerate(zip(omega_as, couplings)):
        x_plus, _, y_plus, _ = rotating_ops(space, j)
        h = h + 0.5 * omega_a * qubit_op("z", j, space)
        h = h + pair.g_r * x_plus + pair.g_ar * y_plus
    return HermitianOperator(h)


def build_from_couplings(
    p: SystemParams, couplings: CouplingPair, space: CompositeSpace
) -> HermitianOperator:
    """Single-qubit Hamiltonian with explicitly given (g_r, g_ar)."""
    if space.n_qubits != 1:
        raise DimensionMismatchError(f"Expected a single-qubit space, got {space.n_qubits} qubits")
    return _assemble(p.omega_r, [p.omega_a], [couplings], space)


def build_hamiltonian(
    kind: ModelKind, p: SystemParams, policy: CutoffPolicy, space: CompositeSpace
) -> HermitianOperator:
    """
    Single-qubit Hamiltonian of the given kind.

    Args:
        kind: JC, Rabi or IRWA
        p: System parameters
        policy: Cutoff policy (only used by IRWA)
        space: Composite space with exactly one qubit

    Returns:
        HermitianOperator
    """
    return build_from_couplings(p, couplings_for_kind(kind, p, policy), space)


def build_multiqubit(
    kind: ModelKind, mp: MultiQubitParams, space: CompositeSpace
) -> HermitianOperator:
    """Multi-qubit Hamiltonian; couplings may differ per qubit."""
    if space.n_qubits != mp.n_qubits:
        raise DimensionMismatchError(
            f"Space has {space.n_qubits} qubits but parameters describe {mp.n_qubits}"
        )

    couplings = [
        couplings_for_kind(kind, mp.qubit_params(j), mp.policy) for j in range(mp.n_qubits)
    ]
    return _assemble(mp.omega_r, [q.omega_a for q in mp.qubits], couplings, space)

