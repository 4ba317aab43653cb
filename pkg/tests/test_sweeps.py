"""
Tests for the sweep orchestrator.

Run with: pytest tests/test_sweeps.py
"""

import sys
import os
sys.path.append(os.path.abspath(os.path.join(os.path.dirname(__file__), '..')))

import math

import numpy as np
import pytest
from unittest.mock import patch

from app.errors import ConfigError
from app.models import (
    CutoffPolicy,
    DetuningPolicy,
    DressedLabel,
    SweepConfig,
    TrackedLevel,
    TrackedSpectrum,
    TrackingAmbiguity,
    Variant,
)
from app.sweeps import SweepRunner, columns_for


def make_config(command, **overrides):
    fields = {
        "command": command,
        "grid_min": 0.0,
        "grid_max": 0.1,
        "steps": 11,
        "delta_policy": DetuningPolicy.parse("fixed:0.01"),
        "cutoff_policy": CutoffPolicy.parse("factor_of_g:10"),
    }
    fields.update(overrides)
    return SweepConfig(**fields)


@pytest.fixture
def dispersive_config():
    """Delta = 10 g with omega_K = 10 |Delta|."""
    return make_config(
        "dispersive",
        grid_min=0.01,
        grid_max=0.05,
        steps=5,
        delta_policy=DetuningPolicy.parse("factor:10"),
        cutoff_policy=CutoffPolicy.parse("factor_of_detuning:10"),
    )


class TestGrid:
    """Grid construction."""

    def test_endpoints_included(self):
        runner = SweepRunner(make_config("cutoff"))
        grid = runner.grid()
        assert len(grid) == 11
        assert grid[0] == 0.0 and grid[-1] == 0.1

    def test_single_point(self):
        assert SweepRunner(make_config("cutoff", steps=1, grid_min=0.05)).grid() == [0.05]

    def test_columns(self):
        assert columns_for(make_config("cutoff")) == ["g_over_wr", "g_r", "g_ar", "ratio"]
        evolve = columns_for(make_config("evolve", sweep="t", g=0.02))
        assert evolve[0] == "t"
        assert len(evolve) == 1 + 32 + 2


class TestCutoffSweep:
    """Coupling-ratio rows."""

    @pytest.mark.asyncio
    async def test_ratio_rows(self):
        results = await SweepRunner(make_config("cutoff")).run()

        assert [r.x for r in results] == pytest.approx(list(np.linspace(0, 0.1, 11)))
        assert not results[0].success
        assert results[0].records[0]["ratio"] is None
        assert "undefined" in results[0].error

        for r in results[1:]:
            record = r.records[0]
            omega_K = 10 * r.x
            expected = math.exp(-((2.01) ** 2 - 0.01 ** 2) / (2 * omega_K ** 2))
            assert record["ratio"] == pytest.approx(expected, abs=1e-12)
        assert results[-1].records[0]["ratio"] == pytest.approx(0.1327, abs=1e-3)

    @pytest.mark.asyncio
    async def test_ratio_monotone(self):
        results = await SweepRunner(make_config("cutoff", grid_min=0.01, steps=10)).run()
        ratios = [r.records[0]["ratio"] for r in results]
        assert all(b > a for a, b in zip(ratios, ratios[1:]))


class TestSpectrumSweep:
    """Tracked levels with JC and second-order IRWA energies."""

    @pytest.mark.asyncio
    async def test_free_row_and_ground_improvement(self):
        config = make_config(
            "spectrum",
            grid_max=0.3,
            steps=4,
            delta_policy=DetuningPolicy.parse("fixed:0"),
            levels=4,
        )
        results = await SweepRunner(config).run()
        assert all(r.success for r in results)

        for record in results[0].records:
            assert record["E_jc"] == pytest.approx(record["E_qrm_exact"], abs=1e-12)
            assert record["E_irwa_pt2"] == pytest.approx(record["E_qrm_exact"], abs=1e-12)

        ground = [rec for rec in results[-1].records if rec["level_label"] == "ground"][0]
        assert abs(ground["E_irwa_pt2"] - ground["E_qrm_exact"]) < abs(ground["E_jc"] - ground["E_qrm_exact"])

        grounds = [r.records[0]["E_qrm_exact"] for r in results]
        assert all(b <= a for a, b in zip(grounds, grounds[1:]))

    @pytest.mark.asyncio
    async def test_tracking_ties_flag_rows(self):
        ground = DressedLabel.ground()
        tracked = TrackedSpectrum(
            sweep_values=[0.0, 0.1],
            levels=[TrackedLevel(label=ground, energies=[-0.5, -0.5025])],
            n_max=20,
            ambiguities=[
                TrackingAmbiguity(step=0, label=ground, energy_gap=0.0),
                TrackingAmbiguity(step=1, label=ground, energy_gap=0.01),
            ],
        )
        config = make_config("spectrum", steps=2, levels=1, delta_policy=DetuningPolicy.parse("fixed:0"))
        with patch("app.sweeps.track_levels", return_value=tracked):
            results = await SweepRunner(config).run()

        assert results[0].success
        assert not results[1].success
        assert "ambiguous tracking of level ground" in results[1].error
        assert results[1].records[0]["E_qrm_exact"] == -0.5025

    @pytest.mark.asyncio
    async def test_fixed_fock_reaches_tracking(self):
        config = make_config("spectrum", steps=2, levels=2, fock=25, delta_policy=DetuningPolicy.parse("fixed:0"))
        runner = SweepRunner(config)
        await runner.run()
        assert runner._tracked.n_max == 25

    @pytest.mark.asyncio
    async def test_requires_coupling_sweep(self):
        config = make_config("spectrum", sweep="delta", g=0.1, grid_min=-0.05, grid_max=0.05)
        with pytest.raises(ConfigError):
            await SweepRunner(config).run()


class TestDispersiveSweep:
    """Resonator-shift rows."""

    @pytest.mark.asyncio
    async def test_rwa_shift_is_tenth_of_coupling(self, dispersive_config):
        results = await SweepRunner(dispersive_config).run()
        for r in results:
            assert r.success
            assert r.records[0]["chi_rwa"] == pytest.approx(r.x / 10)
            assert r.records[0]["chi_exact_jc"] == pytest.approx(r.x / 10, rel=0.05)

    @pytest.mark.asyncio
    async def test_zero_detuning_row_flagged(self, dispersive_config):
        config = dispersive_config.model_copy(update={"grid_min": 0.0})
        results = await SweepRunner(config).run()
        assert not results[0].success
        assert results[0].records == []
        assert all(r.success for r in results[1:])

    @pytest.mark.asyncio
    async def test_null_qubit_row(self):
        config = make_config(
            "dispersive",
            grid_min=0.1,
            grid_max=0.1,
            steps=1,
            delta_policy=DetuningPolicy.parse("factor:-10"),
            cutoff_policy=CutoffPolicy.parse("factor_of_detuning:10"),
        )
        results = await SweepRunner(config).run()
        assert results[0].records[0]["chi_nrwa"] == 0.0

    @pytest.mark.asyncio
    async def test_fixed_fock_reaches_oracle(self, dispersive_config):
        fixed = dispersive_config.model_copy(update={"fock": 12})
        with patch("app.sweeps.exact_shift_oracle", return_value=0.0) as oracle:
            await SweepRunner(fixed).run()
            assert oracle.call_count == 2 * 5
            assert all(call.kwargs["n_max"] == 12 for call in oracle.call_args_list)

            oracle.reset_mock()
            await SweepRunner(dispersive_config).run()
            assert all(call.kwargs["n_max"] is None for call in oracle.call_args_list)

    @pytest.mark.asyncio
    async def test_results_independent_of_workers(self, dispersive_config):
        single = await SweepRunner(dispersive_config.model_copy(update={"workers": 1})).run()
        pooled = await SweepRunner(dispersive_config.model_copy(update={"workers": 4})).run()
        assert [r.records for r in single] == [r.records for r in pooled]


class TestTwoQubitSweeps:
    """Effective couplings and evolution."""

    @pytest.mark.asyncio
    async def test_couplings_vanish_with_coupling(self):
        config = make_config(
            "twoqubit",
            grid_min=1e-4,
            grid_max=0.1,
            steps=5,
            delta_policy=DetuningPolicy.parse("factor:10"),
            cutoff_policy=CutoffPolicy.parse("factor_of_detuning:10"),
        )
        results = await SweepRunner(config).run()
        first = results[0].records[0]
        assert all(abs(first[key]) < 1e-4 for key in ("J_rwa", "J_nr0", "J_nr1", "J_ir0", "J_ir1", "J_ir2"))
        assert abs(first["J_ir2"]) < 1e-12

    @pytest.mark.asyncio
    async def test_zero_detuning_row_flagged(self):
        config = make_config(
            "twoqubit",
            grid_min=0.0,
            grid_max=0.02,
            steps=3,
            delta_policy=DetuningPolicy.parse("factor:10"),
        )
        results = await SweepRunner(config).run()
        assert not results[0].success
        assert results[0].records == []
        assert all(r.success for r in results[1:])

    @pytest.mark.asyncio
    async def test_evolve_reaches_sqrt_iswap(self):
        g, delta = 0.02, 0.2
        config = make_config(
            "evolve",
            sweep="t",
            g=g,
            grid_min=0.0,
            grid_max=math.pi * delta / (4 * g ** 2),
            steps=3,
            delta_policy=DetuningPolicy.parse(f"fixed:{delta}"),
            variant=Variant.RWA,
        )
        results = await SweepRunner(config).run()
        first, last = results[0].records[0], results[-1].records[0]

        assert first["u_ee_ee_re"] == pytest.approx(1.0)
        assert first["u_eg_ge_re"] == pytest.approx(0.0, abs=1e-14)
        assert last["fidelity_to_sqrt_iswap"] >= 1 - 1e-10
        assert all(r.records[0]["unitarity_residual"] <= 1e-10 for r in results)


class TestRegimeSweep:
    """Regime diagnostic rows."""

    @pytest.mark.asyncio
    async def test_regime_rows(self):
        config = make_config("regime", grid_min=0.0, grid_max=0.3, steps=4, delta_policy=DetuningPolicy.parse("fixed:0"))
        results = await SweepRunner(config).run()
        assert results[0].records[0]["omega_K"] is None
        assert results[-1].records[0]["rwa_chain"] is False
        assert results[-1].records[0]["omega_K"] == pytest.approx(3.0)


if __name__ == "__main__":
    pytest.main([__file__, "-v"])
