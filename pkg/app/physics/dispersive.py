"""
Dispersive-regime effective models.

Single-qubit resonator shifts in the RWA, non-RWA and IRWA variants, the
multi-qubit effective Hamiltonian with its resonator-mediated qubit-qubit
couplings, and two-qubit evolution blocks obtained by exponentiating that
Hamiltonian.

The dispersive frame is reached with U = exp(S),
    S = sum_j (lambda_j X-^j - Lambda_j Y-^j),  lambda_j = g_r^j / Delta_j,
    Lambda_j = g_ar^j / Sigma_j,
so that U H U^dagger has no first-order coupling terms.
"""

import logging
from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

import numpy as np
from pydantic import ValidationError

from ..config import Config
from ..errors import DimensionMismatchError, IRWAError, SingularDetuningError, TrackingAmbiguityError
from ..models import (
    CouplingPair,
    CouplingRow,
    CutoffPolicy,
    DetuningPolicy,
    DispersiveShifts,
    DressedLabel,
    EffectiveCouplings,
    ModelKind,
    MultiQubitParams,
    ShiftPair,
    SmallParams,
    SystemParams,
    Variant,
)
from .averaging import averaged_couplings
from .hamiltonians import build_multiqubit
from .numerics import HermitianOperator, eig_hermitian, expm_i, kron, unitarity_residual
from .quantize import CompositeSpace, number, embed, pauli, qubit_op, resonator_ops, rotating_ops
from .spectra import track_levels

logger = logging.getLogger(__name__)

# Two-qubit block basis order
TWO_QUBIT_BASIS = ("ee", "eg", "ge", "gg")

_FULL_KIND = {
    Variant.RWA: ModelKind.JC,
    Variant.NON_RWA: ModelKind.RABI,
    Variant.IRWA: ModelKind.IRWA,
}


def _require_detuning(p: SystemParams) -> None:
    if p.delta == 0:
        raise SingularDetuningError(
            f"Dispersive expressions are singular at zero detuning (omega_a = omega_r = {p.omega_r:g})"
        )


def variant_couplings(variant: Variant, p: SystemParams, policy: CutoffPolicy) -> CouplingPair:
    """(g_r, g_ar) entering each dispersive variant."""
    if variant == Variant.RWA:
        return CouplingPair(g_r=p.g, g_ar=0.0)
    if variant == Variant.NON_RWA:
        return CouplingPair(g_r=p.g, g_ar=p.g)
    return averaged_couplings(p, policy)


def small_params(p: SystemParams, couplings: CouplingPair) -> SmallParams:
    """lambda = g_r / Delta and Lambda = g_ar / Sigma with the validity flag."""
    _require_detuning(p)
    lambda_r = couplings.g_r / p.delta
    return SmallParams(
        lambda_r=lambda_r,
        lambda_ar=couplings.g_ar / p.sigma,
        valid=abs(lambda_r) <= Config.DISPERSIVE_THRESHOLD,
    )


def _chi(p: SystemParams, couplings: CouplingPair) -> float:
    return couplings.g_r ** 2 / p.delta + couplings.g_ar ** 2 / p.sigma


def dispersive_shifts(p: SystemParams, policy: CutoffPolicy) -> DispersiveShifts:
    """All single-qubit shift coefficients at one parameter point."""
    _require_detuning(p)
    g2 = p.g ** 2
    return DispersiveShifts(
        chi_rwa=g2 / p.delta,
        chi_nrwa=g2 * (1.0 / p.delta + 1.0 / p.sigma),
        chi_irwa=_chi(p, averaged_couplings(p, policy)),
        lamb_shift=g2 / p.delta,
        ac_stark_per_photon=2.0 * g2 / p.delta,
    )


def resonator_shift(p: SystemParams, policy: CutoffPolicy, variant: Variant) -> ShiftPair:
    """Resonator frequency shift for the qubit excited (up) and in its ground state (down)."""
    _require_detuning(p)
    chi = _chi(p, variant_couplings(variant, p, policy))
    return ShiftPair(up=chi, down=-chi)


def qubit_shifts(p: SystemParams, policy: CutoffPolicy, variant: Variant) -> Tuple[float, float]:
    """(Lamb shift, ac-Stark shift per photon) of the qubit transition."""
    _require_detuning(p)
    chi = _chi(p, variant_couplings(variant, p, policy))
    return chi, 2.0 * chi


def qubit_frequency(
    p: SystemParams, policy: CutoffPolicy, variant: Variant, photons: int = 0
) -> float:
    """Dressed qubit transition frequency with n photons."""
    lamb, stark = qubit_shifts(p, policy, variant)
    return p.omega_a + lamb + stark * photons


def effective_hamiltonian_1q(
    p: SystemParams, policy: CutoffPolicy, variant: Variant, space: CompositeSpace
) -> HermitianOperator:
    """
    Single-qubit dispersive Hamiltonian.

    RWA:    (omega_a/2 + g^2/2Delta) sz + (omega_r + (g^2/Delta) sz) a^dagger a
    nonRWA: (omega_a/2) sz + omega_r a^dagger a + (chi_nr/2) sz (a + a^dagger)^2
    IRWA:   (omega_a/2) sz + omega_r a^dagger a + (chi_ir/2) sz (2 a^dagger a + 1)
            + (g_r g_ar / 2)(1/Delta + 1/Sigma) sz (a^dagger^2 + a^2)
    """
    if space.n_qubits != 1:
        raise DimensionMismatchError(f"Expected a single-qubit space, got {space.n_qubits} qubits")

    couplings = variant_couplings(variant, p, policy)
    lam = small_params(p, couplings)
    if not lam.valid:
        logger.warning(
            f"Dispersive condition violated: |g_r/Delta| = {abs(lam.lambda_r):.3g} "
            f"> {Config.DISPERSIVE_THRESHOLD:g}"
        )

    a, ad = resonator_ops(space)
    n_op = ad @ a
    sz = qubit_op("z", 0, space)
    identity = np.eye(space.dim)
    h = 0.5 * p.omega_a * sz + p.omega_r * n_op

    if variant == Variant.RWA:
        chi = p.g ** 2 / p.delta
        h = h + 0.5 * chi * sz + chi * sz @ n_op
    elif variant == Variant.NON_RWA:
        chi = p.g ** 2 * (1.0 / p.delta + 1.0 / p.sigma)
        x = a + ad
        h = h + 0.5 * chi * sz @ (x @ x)
    else:
        chi = _chi(p, couplings)
        two_photon = 0.5 * couplings.g_r * couplings.g_ar * (1.0 / p.delta + 1.0 / p.sigma)
        h = h + 0.5 * chi * sz @ (2 * n_op + identity)
        h = h + two_photon * sz @ (ad @ ad + a @ a)

    return HermitianOperator(h)


def _free_labels(delta: float) -> dict:
    """Dressed labels adiabatically connected to |e,0>, |e,1>, |g,0>, |g,1>."""
    up, down = ("+", "-") if delta > 0 else ("-", "+")
    return {
        "e0": DressedLabel.doublet(0, up),
        "e1": DressedLabel.doublet(1, up),
        "g0": DressedLabel.ground(),
        "g1": DressedLabel.doublet(0, down),
    }


def exact_shift_oracle(
    p: SystemParams,
    kind: ModelKind,
    policy: CutoffPolicy,
    steps: Optional[int] = None,
    n_max: Optional[int] = None,
) -> float:
    """
    Resonator shift from the exact spectrum of the full Hamiltonian.

    chi = [(E_e1 - E_e0) - (E_g1 - E_g0)] / 2, with the four levels followed
    adiabatically from the uncoupled states along g' in [0, g].
    The Fock truncation is chosen by convergence unless n_max is given.

    Raises:
        TrackingAmbiguityError: an overlap tie between non-degenerate levels
    """
    if p.g == 0:
        return 0.0
    _require_detuning(p)

    steps = Config.ORACLE_SWEEP_STEPS if steps is None else steps
    sweep = [
        SystemParams(omega_r=p.omega_r, omega_a=p.omega_a, g=p.g * i / (steps - 1))
        for i in range(steps)
    ]
    labels = _free_labels(p.delta)
    tracked = track_levels(
        sweep, kind, policy, k_levels=len(labels), n_max=n_max, labels=list(labels.values())
    )

    for ambiguity in tracked.ambiguities:
        if ambiguity.label in labels.values() and ambiguity.energy_gap > Config.DEGENERACY_THRESHOLD:
            raise TrackingAmbiguityError(
                f"Ambiguous tracking of {ambiguity.label.name} at step {ambiguity.step}",
                step=ambiguity.step,
            )

    e = {name: tracked.energy(label, steps - 1) for name, label in labels.items()}
    return 0.5 * ((e["e1"] - e["e0"]) - (e["g1"] - e["g0"]))


def pair_couplings(
    p_j: SystemParams, c_j: CouplingPair, p_k: SystemParams, c_k: CouplingPair
) -> Tuple[float, float]:
    """
    Flip-flop (J1) and double-flip (J2) strengths between qubits j and k.

    J1 = g_r^j g_r^k (1/D_j + 1/D_k) - g_ar^j g_ar^k (1/S_j + 1/S_k)
    J2 = g_r^j g_ar^k (1/D_j - 1/S_k) + g_ar^j g_r^k (1/D_k - 1/S_j)
    """
    j1 = c_j.g_r * c_k.g_r * (1.0 / p_j.delta + 1.0 / p_k.delta) - c_j.g_ar * c_k.g_ar * (
        1.0 / p_j.sigma + 1.0 / p_k.sigma
    )
    j2 = c_j.g_r * c_k.g_ar * (1.0 / p_j.delta - 1.0 / p_k.sigma) + c_j.g_ar * c_k.g_r * (
        1.0 / p_k.delta - 1.0 / p_j.sigma
    )
    return j1, j2


def _qubit_views(mp: MultiQubitParams, variant: Variant):
    views = []
    for j in range(mp.n_qubits):
        p = mp.qubit_params(j)
        _require_detuning(p)
        views.append((p, variant_couplings(variant, p, mp.policy)))
    return views


def effective_hamiltonian_nq(
    mp: MultiQubitParams, variant: Variant, space: CompositeSpace
) -> HermitianOperator:
    """
    Multi-qubit dispersive Hamiltonian.

    omega_r a^dagger a + sum_j (omega_a^j/2) sz^j + sum_j (chi_j/2) sz^j (2 a^dagger a + 1)
    + sum_{j>k} (J1/2)(s-^j s+^k + s+^j s-^k) + (J2/2)(s-^j s-^k + s+^j s+^k)

    Two-photon terms are not part of the multi-qubit expansion.
    """
    if space.n_qubits != mp.n_qubits:
        raise DimensionMismatchError(
            f"Space has {space.n_qubits} qubits but parameters describe {mp.n_qubits}"
        )

    views = _qubit_views(mp, variant)
    n_op = embed(number(space.fock), space.resonator, space)
    identity = np.eye(space.dim)
    h = mp.omega_r * n_op

    for j, (p, couplings) in enumerate(views):
        sz = qubit_op("z", j, space)
        h = h + 0.5 * p.omega_a * sz + 0.5 * _chi(p, couplings) * sz @ (2 * n_op + identity)

    for j in range(mp.n_qubits):
        for k in range(j):
            j1, j2 = pair_couplings(*views[j], *views[k])
            sp_j, sm_j = qubit_op("+", j, space), qubit_op("-", j, space)
            sp_k, sm_k = qubit_op("+", k, space), qubit_op("-", k, space)
            h = h + 0.5 * j1 * (sm_j @ sp_k + sp_j @ sm_k)
            h = h + 0.5 * j2 * (sm_j @ sm_k + sp_j @ sp_k)

    return HermitianOperator(h)


def effective_hamiltonian_2q(
    mp: MultiQubitParams, variant: Variant, space: CompositeSpace
) -> HermitianOperator:
    """Two-qubit dispersive Hamiltonian (XY for RWA, Ising for non-RWA)."""
    if mp.n_qubits != 2:
        raise DimensionMismatchError(f"Expected two qubits, got {mp.n_qubits}")
    return effective_hamiltonian_nq(mp, variant, space)


def transformation(
    mp: MultiQubitParams, variant: Variant, space: CompositeSpace
) -> Tuple[np.ndarray, np.ndarray]:
    """
    Generator S and unitary U = exp(S) of the dispersive transformation.

    Returns:
        (S, U) with S anti-Hermitian
    """
    s = np.zeros((space.dim, space.dim), dtype=complex)
    for j, (p, couplings) in enumerate(_qubit_views(mp, variant)):
        _, x_minus, _, y_minus = rotating_ops(space, j)
        s = s + (couplings.g_r / p.delta) * x_minus - (couplings.g_ar / p.sigma) * y_minus

    # exp(S) = exp(-i (iS) t) at t = 1 with iS Hermitian
    return s, expm_i(HermitianOperator(1j * s), 1.0)


@dataclass(frozen=True)
class TwoQubitEvolution:
    """
    Two-qubit dispersive evolution in one photon sector, rotating at the qubit frequencies.

    sector_block = exp(-i J0-phase) x block when the phase commutes with the
    interaction; block is the exponential of the qubit-qubit terms alone and
    j0 holds the per-qubit coefficients of the (n + 1/2) sz^j phase.
    """

    t: float
    photon_number: int
    block: np.ndarray
    sector_block: np.ndarray
    j0: Tuple[float, ...]
    unitarity_residual: float


def _two_qubit_z() -> Tuple[np.ndarray, np.ndarray]:
    eye = np.eye(2, dtype=complex)
    return kron(pauli("z"), eye), kron(eye, pauli("z"))


def evolution_2q(
    mp: MultiQubitParams, variant: Variant, t: float, photon_number: int = 0
) -> TwoQubitEvolution:
    """
    Exponentiate the two-qubit effective Hamiltonian in a fixed photon sector.

    Args:
        mp: Two-qubit parameters
        variant: RWA, nonRWA or IRWA
        t: Evolution time
        photon_number: Resonator sector (vacuum by default)
    """
    space = CompositeSpace.single(photon_number + 1, n_qubits=2)
    h = effective_hamiltonian_2q(mp, variant, space).matrix
    index = [space.basis_index(q, photon_number) for q in TWO_QUBIT_BASIS]
    sector = h[np.ix_(index, index)]

    z1, z2 = _two_qubit_z()
    views = _qubit_views(mp, variant)
    frame = 0.5 * views[0][0].omega_a * z1 + 0.5 * views[1][0].omega_a * z2
    sector = sector - frame - mp.omega_r * photon_number * np.eye(4)

    j0 = tuple(_chi(p, c) for p, c in views)
    phase = (photon_number + 0.5) * (j0[0] * z1 + j0[1] * z2)

    sector_block = expm_i(HermitianOperator(sector), t)
    block = expm_i(HermitianOperator(sector - phase), t)
    residual = max(unitarity_residual(block), unitarity_residual(sector_block))

    return TwoQubitEvolution(
        t=t,
        photon_number=photon_number,
        block=block,
        sector_block=sector_block,
        j0=j0,
        unitarity_residual=residual,
    )


def sqrt_iswap() -> np.ndarray:
    """Ideal sqrt(iSWAP) in the (ee, eg, ge, gg) basis."""
    r = 1.0 / np.sqrt(2.0)
    return np.array(
        [[1, 0, 0, 0], [0, r, 1j * r, 0], [0, 1j * r, r, 0], [0, 0, 0, 1]], dtype=complex
    )


def gate_fidelity(u: np.ndarray, v: np.ndarray) -> float:
    """|Tr(V^dagger U)| / d."""
    return float(abs(np.trace(v.conj().T @ u)) / u.shape[0])


def fidelity_to_sqrt_iswap(u: np.ndarray) -> float:
    """
    Fidelity to sqrt(iSWAP) up to a sigma_z frame on one qubit.

    Z on one qubit flips the sign of the exchange amplitude, so both chiralities
    of the gate count.
    """
    z1, _ = _two_qubit_z()
    target = sqrt_iswap()
    return max(gate_fidelity(u, target), gate_fidelity(u, z1 @ target @ z1))


def effective_couplings(mp: MultiQubitParams, j: int = 0, k: int = 1) -> EffectiveCouplings:
    """
    J values for the qubit pair (j, k).

    The RWA and non-RWA entries use qubit j's coupling and detuning, the closed
    forms for identical qubits; the IRWA entries use the time-averaged couplings.
    """
    p_j, p_k = mp.qubit_params(j), mp.qubit_params(k)
    _require_detuning(p_j)
    _require_detuning(p_k)

    c_j = averaged_couplings(p_j, mp.policy)
    c_k = averaged_couplings(p_k, mp.policy)
    j1, j2 = pair_couplings(p_j, c_j, p_k, c_k)
    g2 = p_j.g ** 2

    return EffectiveCouplings(
        j_r=g2 / p_j.delta,
        j_nr0=g2 * (1.0 / p_j.delta + 1.0 / p_j.sigma),
        j_nr1=g2 * (1.0 / p_j.delta - 1.0 / p_j.sigma),
        j_ir0=_chi(p_j, c_j),
        j_ir1=j1,
        j_ir2=j2,
    )


def coupling_sweep(
    g_grid: Sequence[float],
    detuning: DetuningPolicy,
    policy: CutoffPolicy,
    omega_r: float = 1.0,
) -> List[CouplingRow]:
    """Effective couplings of two identical qubits over a coupling grid."""
    if not g_grid:
        raise ValueError("g_grid must not be empty")

    rows = []
    for g in g_grid:
        try:
            mp = MultiQubitParams.uniform(2, omega_r + detuning.delta_at(g), g, omega_r, policy)
            rows.append(CouplingRow(g=g, couplings=effective_couplings(mp)))
        except (IRWAError, ValidationError) as e:
            logger.warning(f"Coupling sweep row g={g:g} flagged: {e}")
            rows.append(CouplingRow(g=g, flag=str(e).splitlines()[0]))
    return rows


def effective_model_fidelity(
    mp: MultiQubitParams,
    variant: Variant,
    times: Sequence[float],
    initial: str = "eg",
    n_max: int = 4,
) -> List[float]:
    """
    State fidelity between full and effective dynamics from |initial, 0>.

    The full model is the time-averaged Hamiltonian matching the variant; the
    effective state is mapped back through U^dagger exp(-i H_eff t) U.
    """
    space = CompositeSpace.single(n_max, n_qubits=mp.n_qubits)
    full = eig_hermitian(build_multiqubit(_FULL_KIND[variant], mp, space))
    effective = eig_hermitian(effective_hamiltonian_nq(mp, variant, space))
    _, u = transformation(mp, variant, space)

    psi0 = space.basis_state(initial, 0)
    full_coeffs = full.vectors.conj().T @ psi0
    eff_coeffs = effective.vectors.conj().T @ (u @ psi0)

    fidelities = []
    for t in times:
        psi_full = full.vectors @ (np.exp(-1j * full.values * t) * full_coeffs)
        psi_eff = u.conj().T @ (effective.vectors @ (np.exp(-1j * effective.values * t) * eff_coeffs))
        fidelities.append(float(abs(np.vdot(psi_full, psi_eff)) ** 2))
    return fidelities
