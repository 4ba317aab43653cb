"""
Dense Hermitian linear algebra.

All matrices are complex numpy arrays; composite spaces are ordered
qubit(s) first, resonator last, with the leftmost Kronecker factor as the
slowest index.
"""

import logging
from dataclasses import dataclass
from functools import reduce

import numpy as np
import scipy.linalg

from ..config import Config
from ..errors import DimensionMismatchError, EigensolverError

logger = logging.getLogger(__name__)


def as_matrix(entries) -> np.ndarray:
    """Coerce to a finite square complex matrix."""
    m = np.asarray(entries, dtype=complex)
    if m.ndim != 2 or m.shape[0] != m.shape[1] or m.shape[0] == 0:
        raise DimensionMismatchError(f"Expected a non-empty square matrix, got shape {m.shape}")
    if not np.all(np.isfinite(m)):
        raise ValueError("Matrix has non-finite entries")
    return m


@dataclass(frozen=True)
class HermitianOperator:
    """Square complex matrix checked Hermitian at construction."""

    matrix: np.ndarray

    def __post_init__(self):
        m = as_matrix(self.matrix).copy()
        residual = float(np.max(np.abs(m - m.conj().T)))
        if residual > Config.HERMITIAN_TOL:
            raise ValueError(f"Operator is not Hermitian (max residual {residual:.3e})")
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    def __add__(self, other: "HermitianOperator") -> "HermitianOperator":
        return HermitianOperator(self.matrix + other.matrix)

    def __sub__(self, other: "HermitianOperator") -> "HermitianOperator":
        return HermitianOperator(self.matrix - other.matrix)


@dataclass(frozen=True)
class EigenSystem:
    """Ascending eigenvalues with orthonormal eigenvectors as columns."""

    values: np.ndarray
    vectors: np.ndarray


def eig_hermitian(h: HermitianOperator) -> EigenSystem:
    """
    Diagonalize a Hermitian operator.

    Args:
        h: Hermitian operator

    Returns:
        EigenSystem with real ascending eigenvalues
    """
    try:
        values, vectors = scipy.linalg.eigh(h.matrix)
    except (np.linalg.LinAlgError, scipy.linalg.LinAlgError) as e:
        raise EigensolverError(h.dim, str(e)) from e

    return EigenSystem(values=np.asarray(values, dtype=float), vectors=vectors)


def expm_i(h: HermitianOperator, t: float) -> np.ndarray:
    """Spectral matrix exponential U = exp(-i H t)."""
    system = eig_hermitian(h)
    phases = np.exp(-1j * system.values * t)
    return (system.vectors * phases) @ system.vectors.conj().T


def kron(*factors: np.ndarray) -> np.ndarray:
    """Kronecker product, leftmost factor slowest."""
    if not factors:
        raise DimensionMismatchError("kron needs at least one factor")
    return reduce(np.kron, (np.asarray(f, dtype=complex) for f in factors))


def commutator(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    return a @ b - b @ a


def unitarity_residual(u: np.ndarray) -> float:
    """max |U^dagger U - I|."""
    return float(np.max(np.abs(u.conj().T @ u - np.eye(u.shape[0]))))
