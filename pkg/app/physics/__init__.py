"""
Numerical core: operators, Hamiltonians, spectra, perturbation theory and
dispersive effective models for qubit-resonator systems.
"""

from .averaging import CUTOFF_FUNCTIONS, averaged_couplings, cutoff, regime_check, resolve_width
from .dispersive import (
    TwoQubitEvolution,
    coupling_sweep,
    dispersive_shifts,
    effective_couplings,
    effective_hamiltonian_1q,
    effective_hamiltonian_2q,
    effective_hamiltonian_nq,
    effective_model_fidelity,
    evolution_2q,
    exact_shift_oracle,
    fidelity_to_sqrt_iswap,
    gate_fidelity,
    qubit_frequency,
    qubit_shifts,
    resonator_shift,
    small_params,
    sqrt_iswap,
    transformation,
)
from .hamiltonians import build_from_couplings, build_hamiltonian, build_multiqubit, couplings_for_kind
from .numerics import EigenSystem, HermitianOperator, eig_hermitian, expm_i
from .perturbation import brute_force_second_order, jc_level, perturbed_spectrum, second_order
from .quantize import CompositeSpace, FockSpace
from .spectra import ConvergedSpectrum, converged_spectrum, mixing_angle, track_levels

__all__ = [
    "CUTOFF_FUNCTIONS",
    "CompositeSpace",
    "ConvergedSpectrum",
    "EigenSystem",
    "FockSpace",
    "HermitianOperator",
    "TwoQubitEvolution",
    "averaged_couplings",
    "brute_force_second_order",
    "build_from_couplings",
    "build_hamiltonian",
    "build_multiqubit",
    "converged_spectrum",
    "coupling_sweep",
    "couplings_for_kind",
    "cutoff",
    "dispersive_shifts",
    "effective_couplings",
    "effective_hamiltonian_1q",
    "effective_hamiltonian_2q",
    "effective_hamiltonian_nq",
    "effective_model_fidelity",
    "eig_hermitian",
    "evolution_2q",
    "exact_shift_oracle",
    "expm_i",
    "fidelity_to_sqrt_iswap",
    "gate_fidelity",
    "jc_level",
    "mixing_angle",
    "perturbed_spectrum",
    "qubit_frequency",
    "qubit_shifts",
    "regime_check",
    "resolve_width",
    "resonator_shift",
    "second_order",
    "small_params",
    "sqrt_iswap",
    "track_levels",
    "transformation",
]
