"""
Pydantic models for parameters, intermediate records and sweep results.
"""

import math
from enum import Enum
from typing import Any, Dict, List, Literal, Optional, Union

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator


class KernelFamily(str, Enum):
    """Weighting-function families for time averaging."""

    GAUSSIAN = "gaussian"


class ModelKind(str, Enum):
    """Qubit-resonator Hamiltonian families."""

    JC = "jc"
    RABI = "rabi"
    IRWA = "irwa"


class Variant(str, Enum):
    """Dispersive effective-model variants."""

    RWA = "rwa"
    NON_RWA = "nonrwa"
    IRWA = "irwa"


class CutoffMode(str, Enum):
    """How the cutoff width is chosen at a sweep point."""

    FACTOR_OF_G = "factor_of_g"
    FACTOR_OF_DETUNING = "factor_of_detuning"
    FIXED = "fixed"


class DetuningMode(str, Enum):
    """How the detuning is chosen at a sweep point."""

    FIXED = "fixed"
    FACTOR = "factor"


class _Frozen(BaseModel):
    model_config = ConfigDict(frozen=True, allow_inf_nan=False)


class SystemParams(_Frozen):
    """Single qubit coupled to one resonator mode (angular frequencies, hbar = 1)."""

    omega_r: float = Field(default=1.0, gt=0, description="Resonator frequency")
    omega_a: float = Field(..., ge=0, description="Qubit frequency")
    g: float = Field(..., ge=0, description="Dipole coupling strength")

    @property
    def delta(self) -> float:
        return self.omega_a - self.omega_r

    @property
    def sigma(self) -> float:
        return self.omega_a + self.omega_r

    @classmethod
    def from_detuning(cls, delta: float, g: float, omega_r: float = 1.0) -> "SystemParams":
        """Build parameters from the detuning instead of the qubit frequency."""
        return cls(omega_r=omega_r, omega_a=omega_r + delta, g=g)


class AveragingKernel(_Frozen):
    """Time-averaging kernel with cutoff width omega_K (tau = 1 / omega_K)."""

    family: KernelFamily = Field(default=KernelFamily.GAUSSIAN)
    omega_K: float = Field(..., gt=0, description="Cutoff width")


class CouplingPair(_Frozen):
    """Time-averaged co-rotating and counter-rotating couplings."""

    g_r: float = Field(..., ge=0)
    g_ar: float = Field(..., ge=0)

    @property
    def ratio(self) -> Optional[float]:
        """g_ar / g_r, undefined when both vanish."""
        if self.g_r == 0:
            return None
        return self.g_ar / self.g_r


class CutoffPolicy(_Frozen):
    """Rule resolving the cutoff width at a sweep point."""

    mode: CutoffMode = Field(default=CutoffMode.FACTOR_OF_G)
    value: float = Field(default=10.0, gt=0)

    @classmethod
    def parse(cls, text: str) -> "CutoffPolicy":
        """Parse `factor_of_g:C`, `factor_of_detuning:C` or `fixed:V`."""
        mode, _, value = text.partition(":")
        if not value:
            raise ValueError(f"Cutoff policy needs MODE:VALUE, got {text!r}")
        return cls(mode=CutoffMode(mode.strip()), value=float(value))

    def __str__(self) -> str:
        return f"{self.mode.value}:{self.value:g}"


class DetuningPolicy(_Frozen):
    """Rule resolving the detuning at a sweep point: fixed value or c * g."""

    mode: DetuningMode = Field(default=DetuningMode.FIXED)
    value: float = Field(default=0.0)

    @classmethod
    def parse(cls, text: str) -> "DetuningPolicy":
        """Parse `fixed:V` or `factor:C`."""
        mode, _, value = text.partition(":")
        if not value:
            raise ValueError(f"Detuning policy needs MODE:VALUE, got {text!r}")
        return cls(mode=DetuningMode(mode.strip()), value=float(value))

    def delta_at(self, g: float) -> float:
        if self.mode == DetuningMode.FACTOR:
            return self.value * g
        return self.value


class QubitParams(_Frozen):
    """Per-qubit frequency and coupling."""

    omega_a: float = Field(..., ge=0)
    g: float = Field(..., ge=0)


class MultiQubitParams(_Frozen):
    """Several qubits sharing one resonator mode."""

    omega_r: float = Field(default=1.0, gt=0)
    qubits: List[QubitParams] = Field(..., min_length=1)
    policy: CutoffPolicy = Field(default_factory=CutoffPolicy)

    @property
    def n_qubits(self) -> int:
        return len(self.qubits)

    def qubit_params(self, j: int) -> SystemParams:
        """View qubit j together with the shared resonator."""
        q = self.qubits[j]
        return SystemParams(omega_r=self.omega_r, omega_a=q.omega_a, g=q.g)

    @classmethod
    def uniform(
        cls,
        n_qubits: int,
        omega_a: float,
        g: float,
        omega_r: float = 1.0,
        policy: Optional[CutoffPolicy] = None,
    ) -> "MultiQubitParams":
        """Identical qubits, the setting of the worked two-qubit examples."""
        return cls(
            omega_r=omega_r,
            qubits=[QubitParams(omega_a=omega_a, g=g) for _ in range(n_qubits)],
            policy=policy or CutoffPolicy(),
        )


class DressedLabel(_Frozen):
    """
    Label of a dressed level: the ground state |g,0> or a member of doublet n.

    Doublet n mixes |e,n> and |g,n+1>.
    """

    kind: Literal["ground", "doublet"]
    n: Optional[int] = Field(default=None, ge=0)
    sign: Optional[Literal["+", "-"]] = None

    @model_validator(mode="after")
    def _check_fields(self) -> "DressedLabel":
        if self.kind == "ground" and (self.n is not None or self.sign is not None):
            raise ValueError("ground label carries no doublet index or sign")
        if self.kind == "doublet" and (self.n is None or self.sign is None):
            raise ValueError("doublet label needs both n and sign")
        return self

    @classmethod
    def ground(cls) -> "DressedLabel":
        return cls(kind="ground")

    @classmethod
    def doublet(cls, n: int, sign: str) -> "DressedLabel":
        return cls(kind="doublet", n=n, sign=sign)

    @classmethod
    def parse(cls, name: str) -> "DressedLabel":
        """Inverse of `name`: 'ground', '0+', '3-'."""
        if name == "ground":
            return cls.ground()
        return cls.doublet(int(name[:-1]), name[-1])

    @property
    def name(self) -> str:
        if self.kind == "ground":
            return "ground"
        return f"{self.n}{self.sign}"


class DressedAngle(_Frozen):
    """
    Mixing angle of doublet n, theta_n = atan2(2 g_r sqrt(n+1), Delta).

    Lies in [0, pi); pi itself only appears as the g_r -> 0 limit below resonance.
    """

    n: int = Field(..., ge=0)
    theta_n: float = Field(..., ge=0, le=math.pi)

    @property
    def cos_half(self) -> float:
        """Amplitude of |e,n> in |n,+>."""
        return math.cos(self.theta_n / 2)

    @property
    def sin_half(self) -> float:
        """Amplitude of |g,n+1> in |n,+>."""
        return math.sin(self.theta_n / 2)


class PerturbedLevel(_Frozen):
    """Dressed level with its second-order counter-rotating correction."""

    label: DressedLabel
    e0: float
    e1: float = 0.0
    e2: float

    @property
    def total(self) -> float:
        return self.e0 + self.e1 + self.e2


class SmallParams(_Frozen):
    """Dispersive expansion parameters lambda = g_r / Delta, Lambda = g_ar / Sigma."""

    lambda_r: float
    lambda_ar: float
    valid: bool


class DispersiveShifts(_Frozen):
    """Qubit-conditioned resonator shifts and qubit frequency shifts."""

    chi_rwa: float
    chi_nrwa: float
    chi_irwa: float
    lamb_shift: float
    ac_stark_per_photon: float


class ShiftPair(_Frozen):
    """Resonator frequency shift for the qubit up (excited) and down (ground)."""

    up: float
    down: float


class EffectiveCouplings(_Frozen):
    """Resonator-mediated two-qubit coupling strengths."""

    j_r: float
    j_nr0: float
    j_nr1: float
    j_ir0: float
    j_ir1: float
    j_ir2: float


class RegimeReport(_Frozen):
    """Which inequality chains hold at a parameter point."""

    omega_K: Optional[float] = None
    ratio: float
    averaging_condition: bool
    rwa_chain: bool
    dispersive_rwa_chain: bool
    ultrastrong_chain: bool

    @property
    def regime(self) -> str:
        if self.dispersive_rwa_chain:
            return "dispersive-rwa"
        if self.rwa_chain:
            return "rwa"
        if self.ultrastrong_chain:
            return "dispersive-ultrastrong"
        return "intermediate"


class TrackedLevel(BaseModel):
    """Energies of one adiabatically followed level across a sweep."""

    label: DressedLabel
    energies: List[float] = Field(default_factory=list)


class TrackingAmbiguity(BaseModel):
    """An overlap tie resolved by energy order."""

    step: int
    label: DressedLabel
    energy_gap: float


class TrackedSpectrum(BaseModel):
    """Result of adiabatic level tracking over a coupling sweep."""

    sweep_values: List[float]
    levels: List[TrackedLevel]
    n_max: int
    ambiguities: List[TrackingAmbiguity] = Field(default_factory=list)

    def energy(self, label: DressedLabel, step: int) -> float:
        for level in self.levels:
            if level.label == label:
                return level.energies[step]
        raise KeyError(f"Level {label.name} is not tracked")


class SweepConfig(BaseModel):
    """Fully resolved configuration of one command-line sweep."""

    model_config = ConfigDict(allow_inf_nan=False, extra="forbid")

    command: Literal["cutoff", "spectrum", "dispersive", "twoqubit", "evolve", "regime"]
    sweep: Literal["g", "delta", "t"] = "g"
    grid_min: float = 0.0
    grid_max: float = 0.1
    steps: int = Field(default=11, ge=1)
    omega_r: float = Field(default=1.0, gt=0)
    omega_a: Optional[float] = Field(default=None, ge=0)
    delta_policy: DetuningPolicy = Field(default_factory=DetuningPolicy)
    g: Optional[float] = Field(default=None, ge=0)
    cutoff_policy: CutoffPolicy = Field(default_factory=CutoffPolicy)
    fock: Union[Literal["auto"], int] = "auto"
    levels: int = Field(default=4, ge=1)
    variant: Variant = Variant.RWA
    photon_number: int = Field(default=0, ge=0)
    out: Optional[str] = None
    allow_flagged: bool = False
    workers: Optional[int] = Field(default=None, ge=1)

    @field_validator("fock")
    @classmethod
    def _check_fock(cls, value: Union[str, int]) -> Union[str, int]:
        if value != "auto" and int(value) < 1:
            raise ValueError("fock truncation must be 'auto' or a positive integer")
        return value

    @model_validator(mode="before")
    @classmethod
    def _default_sweep(cls, data: Any) -> Any:
        # evolve sweeps time unless told otherwise; everything else sweeps g
        if isinstance(data, dict) and data.get("sweep") is None:
            data = {**data, "sweep": "t" if data.get("command") == "evolve" else "g"}
        return data

    @model_validator(mode="after")
    def _check_grid(self) -> "SweepConfig":
        if self.grid_min > self.grid_max:
            raise ValueError("grid min must not exceed grid max")
        if self.command == "evolve" and self.sweep != "t":
            raise ValueError("the evolve command sweeps time; set the coupling with g")
        if self.command != "evolve" and self.sweep == "t":
            raise ValueError(f"time sweeps are only supported by evolve, not {self.command}")
        if self.sweep in ("delta", "t") and self.g is None:
            raise ValueError(f"a {self.sweep} sweep needs a fixed coupling g")
        return self

    def params_at(self, x: float) -> SystemParams:
        """System parameters at grid value x (g or delta; fixed for time sweeps)."""
        if self.sweep == "delta":
            return SystemParams.from_detuning(x, self.g, self.omega_r)
        g = x if self.sweep == "g" else self.g
        if self.omega_a is not None:
            return SystemParams(omega_r=self.omega_r, omega_a=self.omega_a, g=g)
        return SystemParams.from_detuning(self.delta_policy.delta_at(g), g, self.omega_r)


class RowResult(BaseModel):
    """Result of evaluating one sweep grid point."""

    x: float = Field(..., description="Grid value")
    success: bool = Field(..., description="Whether the row was computed")
    records: List[Dict[str, Any]] = Field(default_factory=list, description="CSV records")
    error: Optional[str] = Field(default=None, description="Reason the row was flagged")
    execution_time_ms: float = Field(default=0.0, description="Execution time in milliseconds")


class CouplingRow(BaseModel):
    """One grid point of an effective-coupling sweep."""

    g: float
    couplings: Optional[EffectiveCouplings] = None
    flag: Optional[str] = None
