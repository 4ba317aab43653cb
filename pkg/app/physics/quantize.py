"""
Truncated bosonic and qubit operators, and embeddings into composite spaces.

Qubit basis order is (|e>, |g>) with sigma_z |e> = +|e>. Composite spaces are
ordered qubit 0, qubit 1, ..., resonator.
"""

from typing import Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, Field

from ..errors import DimensionMismatchError
from .numerics import kron

_PAULI = {
    "x": np.array([[0, 1], [1, 0]], dtype=complex),
    "y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "z": np.array([[1, 0], [0, -1]], dtype=complex),
    "+": np.array([[0, 1], [0, 0]], dtype=complex),
    "-": np.array([[0, 0], [1, 0]], dtype=complex),
}


class FockSpace(BaseModel):
    """Photon numbers 0..n_max."""

    model_config = ConfigDict(frozen=True)

    n_max: int = Field(..., ge=1, description="Highest photon number kept")

    @property
    def dim(self) -> int:
        return self.n_max + 1


class CompositeSpace(BaseModel):
    """n_qubits two-level systems followed by one truncated resonator."""

    model_config = ConfigDict(frozen=True)

    n_qubits: int = Field(..., ge=1, description="Number of qubits")
    fock: FockSpace

    @classmethod
    def single(cls, n_max: int, n_qubits: int = 1) -> "CompositeSpace":
        return cls(n_qubits=n_qubits, fock=FockSpace(n_max=n_max))

    @property
    def dim(self) -> int:
        return 2 ** self.n_qubits * self.fock.dim

    @property
    def resonator(self) -> int:
        """Slot index of the resonator."""
        return self.n_qubits

    def slot_dims(self) -> Tuple[int, ...]:
        return (2,) * self.n_qubits + (self.fock.dim,)

    def basis_index(self, qubits: str, photons: int) -> int:
        """Index of the product state |qubits, photons>, e.g. ('eg', 1)."""
        if len(qubits) != self.n_qubits or photons > self.fock.n_max or photons < 0:
            raise DimensionMismatchError(f"State |{qubits},{photons}> is outside the space")
        index = 0
        for q in qubits:
            index = index * 2 + {"e": 0, "g": 1}[q]
        return index * self.fock.dim + photons

    def basis_state(self, qubits: str, photons: int) -> np.ndarray:
        psi = np.zeros(self.dim, dtype=complex)
        psi[self.basis_index(qubits, photons)] = 1.0
        return psi


def annihilation(space: FockSpace) -> np.ndarray:
    """Truncated a with a|m+1> = sqrt(m+1)|m>."""
    return np.diag(np.sqrt(np.arange(1, space.dim)), k=1).astype(complex)


def number(space: FockSpace) -> np.ndarray:
    return np.diag(np.arange(space.dim)).astype(complex)


def pauli(which: str) -> np.ndarray:
    """Pauli matrix: 'x', 'y', 'z', '+' or '-'."""
    try:
        return _PAULI[which].copy()
    except KeyError:
        raise ValueError(f"Unknown Pauli operator {which!r}") from None


def embed(op: np.ndarray, slot: int, space: CompositeSpace) -> np.ndarray:
    """Place op on one slot with identities elsewhere."""
    dims = space.slot_dims()
    if not 0 <= slot < len(dims):
        raise DimensionMismatchError(f"Slot {slot} out of range for {len(dims)} slots")
    op = np.asarray(op, dtype=complex)
    if op.shape != (dims[slot], dims[slot]):
        raise DimensionMismatchError(
            f"Operator of shape {op.shape} does not fit slot {slot} of dimension {dims[slot]}"
        )
    factors = [op if i == slot else np.eye(d, dtype=complex) for i, d in enumerate(dims)]
    return kron(*factors)


def resonator_ops(space: CompositeSpace) -> Tuple[np.ndarray, np.ndarray]:
    """(a, a^dagger) on the composite space."""
    a = embed(annihilation(space.fock), space.resonator, space)
    return a, a.conj().T


def qubit_op(which: str, qubit: int, space: CompositeSpace) -> np.ndarray:
    if not 0 <= qubit < space.n_qubits:
        raise DimensionMismatchError(f"Qubit index {qubit} out of range for {space.n_qubits} qubits")
    return embed(pauli(which), qubit, space)


def rotating_ops(
    space: CompositeSpace, qubit: int
) -> Tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
    """
    Co- and counter-rotating combinations for one qubit.

    X± = a σ+ ± a† σ-  and  Y± = a σ- ± a† σ+.

    Returns:
        (X+, X-, Y+, Y-); the + forms are Hermitian, the - forms anti-Hermitian
    """
    a, ad = resonator_ops(space)
    sp = qubit_op("+", qubit, space)
    sm = qubit_op("-", qubit, space)

    x_plus = a @ sp + ad @ sm
    x_minus = a @ sp - ad @ sm
    y_plus = a @ sm + ad @ sp
    y_minus = a @ sm - ad @ sp
    return x_plus, x_minus, y_plus, y_minus


def parity(space: CompositeSpace) -> np.ndarray:
    """Z2 parity: product of all sigma_z times exp(i pi a^dagger a)."""
    photon_parity = np.diag((-1.0) ** np.arange(space.fock.dim)).astype(complex)
    factors = [pauli("z")] * space.n_qubits + [photon_parity]
    return kron(*factors)


def excitation_number(space: CompositeSpace) -> np.ndarray:
    """a^dagger a plus the number of excited qubits."""
    total = embed(number(space.fock), space.resonator, space)
    for j in range(space.n_qubits):
        total = total + qubit_op("+", j, space) @ qubit_op("-", j, space)
    return total
