"""
Sweep orchestrator.

Evaluates every grid point of a SweepConfig concurrently in a worker pool and
collects one RowResult per point, in grid order. Numerical failures at a single
point flag that row instead of aborting the sweep.
"""

import asyncio
import logging
import time
from concurrent.futures import ThreadPoolExecutor
from typing import Any, Dict, List, Optional, Tuple

import numpy as np
from pydantic import ValidationError

from .config import Config
from .errors import ConfigError, DegeneracyError, IRWAError
from .models import (
    CouplingPair,
    DetuningPolicy,
    DressedLabel,
    ModelKind,
    MultiQubitParams,
    RowResult,
    SweepConfig,
    TrackedSpectrum,
)
from .physics import (
    averaged_couplings,
    coupling_sweep,
    dispersive_shifts,
    evolution_2q,
    exact_shift_oracle,
    fidelity_to_sqrt_iswap,
    jc_level,
    regime_check,
    second_order,
    track_levels,
)
from .physics.dispersive import TWO_QUBIT_BASIS

logger = logging.getLogger(__name__)

Records = List[Dict[str, Any]]


def _block_columns() -> List[str]:
    columns = []
    for row in TWO_QUBIT_BASIS:
        for col in TWO_QUBIT_BASIS:
            columns.extend([f"u_{row}_{col}_re", f"u_{row}_{col}_im"])
    return columns


def columns_for(config: SweepConfig) -> List[str]:
    """CSV header for a command, without the trailing flag column."""
    x = {"g": "g_over_wr", "delta": "delta_over_wr", "t": "t"}[config.sweep]
    if config.command == "cutoff":
        return [x, "g_r", "g_ar", "ratio"]
    if config.command == "spectrum":
        return [x, "level_label", "E_jc", "E_qrm_exact", "E_irwa_pt2"]
    if config.command == "dispersive":
        return [x, "chi_rwa", "chi_nrwa", "chi_irwa", "chi_exact_qrm", "chi_exact_jc"]
    if config.command == "twoqubit":
        return [x, "J_rwa", "J_nr0", "J_nr1", "J_ir0", "J_ir1", "J_ir2"]
    if config.command == "evolve":
        return [x] + _block_columns() + ["unitarity_residual", "fidelity_to_sqrt_iswap"]
    return [
        x,
        "omega_K",
        "averaging_condition",
        "rwa_chain",
        "dispersive_rwa_chain",
        "ultrastrong_chain",
        "regime",
    ]


class SweepRunner:
    """Runs one configured sweep."""

    def __init__(self, config: SweepConfig):
        self.config = config
        self.x_name = columns_for(config)[0]
        self._tracked: Optional[TrackedSpectrum] = None

    def grid(self) -> List[float]:
        """Grid values, endpoints included."""
        c = self.config
        if c.steps == 1:
            return [c.grid_min]
        return [float(x) for x in np.linspace(c.grid_min, c.grid_max, c.steps)]

    async def run(self) -> List[RowResult]:
        """
        Evaluate the whole grid.

        Returns:
            One RowResult per grid point, in grid order

        Raises:
            IRWAError: a failure in the shared preparation step (e.g. level tracking)
        """
        grid = self.grid()
        logger.info(
            f"Starting {self.config.command} sweep over {self.config.sweep} "
            f"in [{self.config.grid_min:g}, {self.config.grid_max:g}] ({len(grid)} points)"
        )
        start = time.time()

        await asyncio.to_thread(self._prepare, grid)

        loop = asyncio.get_running_loop()
        with ThreadPoolExecutor(max_workers=self.config.workers) as executor:
            results = await asyncio.gather(
                *(
                    loop.run_in_executor(executor, self._run_row, index, x)
                    for index, x in enumerate(grid)
                )
            )

        flagged = sum(1 for r in results if not r.success)
        logger.info(
            f"Finished {self.config.command} sweep in {(time.time() - start) * 1000:.0f} ms "
            f"({flagged} flagged rows)"
        )
        return list(results)

    def _prepare(self, grid: List[float]) -> None:
        """Work shared by all rows."""
        c = self.config
        if c.command != "spectrum":
            return
        if c.sweep != "g":
            raise ConfigError("the spectrum command tracks levels along a g sweep only")

        sweep = [c.params_at(x) for x in grid]
        if any(abs(p.delta) > Config.NEAR_RESONANCE_THRESHOLD * p.omega_r for p in sweep):
            logger.warning("Spectrum sweep leaves the near-resonance range of second-order IRWA")

        self._tracked = track_levels(
            sweep, ModelKind.RABI, c.cutoff_policy, c.levels, n_max=self._fixed_fock()
        )
        logger.info(f"Tracked {c.levels} levels with n_max={self._tracked.n_max}")

    def _fixed_fock(self) -> Optional[int]:
        return None if self.config.fock == "auto" else int(self.config.fock)

    def _run_row(self, index: int, x: float) -> RowResult:
        start = time.time()
        try:
            records, flag = self._evaluate(index, x)
        except (IRWAError, ValidationError) as e:
            reason = str(e).splitlines()[0]
            logger.warning(f"Row {self.x_name}={x:g} flagged: {reason}")
            records, flag = [], reason

        execution_time = (time.time() - start) * 1000
        logger.debug(f"Row {self.x_name}={x:g} took {execution_time:.1f} ms")
        return RowResult(
            x=x,
            success=flag is None,
            records=records,
            error=flag,
            execution_time_ms=execution_time,
        )

    def _evaluate(self, index: int, x: float) -> Tuple[Records, Optional[str]]:
        command = self.config.command
        if command == "cutoff":
            return self._cutoff_row(x)
        elif command == "spectrum":
            return self._spectrum_row(index, x)
        elif command == "dispersive":
            return self._dispersive_row(x)
        elif command == "twoqubit":
            return self._twoqubit_row(x)
        elif command == "evolve":
            return self._evolve_row(x)
        return self._regime_row(x)

    def _cutoff_row(self, x: float) -> Tuple[Records, Optional[str]]:
        pair = averaged_couplings(self.config.params_at(x), self.config.cutoff_policy)
        record = {self.x_name: x, "g_r": pair.g_r, "g_ar": pair.g_ar, "ratio": pair.ratio}
        flag = None if pair.ratio is not None else "ratio g_ar/g_r undefined at g_r = 0"
        return [record], flag

    def _spectrum_row(self, index: int, x: float) -> Tuple[Records, Optional[str]]:
        c = self.config
        p = c.params_at(x)
        rwa = CouplingPair(g_r=p.g, g_ar=0.0)
        irwa = averaged_couplings(p, c.cutoff_policy)

        records, flag = [], None
        for ambiguity in self._tracked.ambiguities:
            if ambiguity.step == index and ambiguity.energy_gap > Config.DEGENERACY_THRESHOLD:
                flag = flag or (
                    f"ambiguous tracking of level {ambiguity.label.name} "
                    f"(energy gap {ambiguity.energy_gap:.3e})"
                )
        for level in self._tracked.levels:
            label: DressedLabel = level.label
            try:
                pt2 = jc_level(label, p, irwa) + second_order(label, p, irwa)
            except DegeneracyError as e:
                pt2, flag = None, flag or str(e)
            records.append(
                {
                    self.x_name: x,
                    "level_label": label.name,
                    "E_jc": jc_level(label, p, rwa),
                    "E_qrm_exact": level.energies[index],
                    "E_irwa_pt2": pt2,
                }
            )
        return records, flag

    def _dispersive_row(self, x: float) -> Tuple[Records, Optional[str]]:
        c = self.config
        p = c.params_at(x)
        shifts = dispersive_shifts(p, c.cutoff_policy)
        n_max = self._fixed_fock()
        record = {
            self.x_name: x,
            "chi_rwa": shifts.chi_rwa,
            "chi_nrwa": shifts.chi_nrwa,
            "chi_irwa": shifts.chi_irwa,
            "chi_exact_qrm": exact_shift_oracle(p, ModelKind.RABI, c.cutoff_policy, n_max=n_max),
            "chi_exact_jc": exact_shift_oracle(p, ModelKind.JC, c.cutoff_policy, n_max=n_max),
        }
        return [record], None

    def _pair(self, x: float) -> MultiQubitParams:
        p = self.config.params_at(x)
        return MultiQubitParams.uniform(2, p.omega_a, p.g, p.omega_r, self.config.cutoff_policy)

    def _twoqubit_row(self, x: float) -> Tuple[Records, Optional[str]]:
        p = self.config.params_at(x)
        detuning = DetuningPolicy(value=p.delta)
        row = coupling_sweep([p.g], detuning, self.config.cutoff_policy, p.omega_r)[0]
        if row.couplings is None:
            return [], row.flag
        j = row.couplings
        record = {
            self.x_name: x,
            "J_rwa": j.j_r,
            "J_nr0": j.j_nr0,
            "J_nr1": j.j_nr1,
            "J_ir0": j.j_ir0,
            "J_ir1": j.j_ir1,
            "J_ir2": j.j_ir2,
        }
        return [record], None

    def _evolve_row(self, x: float) -> Tuple[Records, Optional[str]]:
        c = self.config
        evolution = evolution_2q(self._pair(x), c.variant, x, photon_number=c.photon_number)
        record: Dict[str, Any] = {self.x_name: x}
        values = iter(_block_columns())
        for entry in evolution.block.flatten():
            record[next(values)] = float(entry.real)
            record[next(values)] = float(entry.imag)
        record["unitarity_residual"] = evolution.unitarity_residual
        record["fidelity_to_sqrt_iswap"] = fidelity_to_sqrt_iswap(evolution.block)

        flag = None
        if evolution.unitarity_residual > Config.UNITARY_TOL:
            flag = f"unitarity residual {evolution.unitarity_residual:.3e}"
        return [record], flag

    def _regime_row(self, x: float) -> Tuple[Records, Optional[str]]:
        report = regime_check(self.config.params_at(x), self.config.cutoff_policy)
        record = {
            self.x_name: x,
            "omega_K": report.omega_K,
            "averaging_condition": report.averaging_condition,
            "rwa_chain": report.rwa_chain,
            "dispersive_rwa_chain": report.dispersive_rwa_chain,
            "ultrastrong_chain": report.ultrastrong_chain,
            "regime": report.regime,
        }
        return [record], None
