"""
Tests for cutoff functions, time-averaged couplings and regime checks.

Run with: pytest tests/test_averaging.py
"""

import sys
import os
sys.path.append(os.path.abspath(os.path.join(os.path.dirname(__file__), '..')))

import math

import numpy as np
import pytest

from app.errors import PolicyResolutionError
from app.models import AveragingKernel, CutoffMode, CutoffPolicy, SystemParams
from app.physics.averaging import averaged_couplings, cutoff, regime_check, resolve_width


@pytest.fixture
def fig1_point():
    """Right edge of the coupling-ratio curve."""
    return SystemParams.from_detuning(0.01, g=0.1)


class TestCutoff:
    """Gaussian cutoff K(omega)."""

    def test_unity_at_zero(self):
        assert cutoff(AveragingKernel(omega_K=0.7), 0.0) == 1.0

    def test_value_at_width(self):
        assert cutoff(AveragingKernel(omega_K=1.3), 1.3) == pytest.approx(math.exp(-0.5), abs=1e-15)

    @pytest.mark.parametrize("omega", [0.1, 0.9, 3.0])
    def test_even(self, omega):
        kernel = AveragingKernel(omega_K=0.8)
        assert cutoff(kernel, omega) == cutoff(kernel, -omega)

    def test_nonincreasing(self):
        kernel = AveragingKernel(omega_K=0.5)
        values = [cutoff(kernel, w) for w in np.linspace(0, 3, 31)]
        assert all(b <= a for a, b in zip(values, values[1:]))


class TestResolveWidth:
    """Cutoff policies."""

    def test_factor_of_g(self, fig1_point):
        assert resolve_width(fig1_point, CutoffPolicy(value=10)) == pytest.approx(1.0)

    def test_factor_of_detuning(self):
        p = SystemParams.from_detuning(-0.2, g=0.02)
        policy = CutoffPolicy(mode=CutoffMode.FACTOR_OF_DETUNING, value=10)
        assert resolve_width(p, policy) == pytest.approx(2.0)

    def test_fixed(self, fig1_point):
        assert resolve_width(fig1_point, CutoffPolicy(mode=CutoffMode.FIXED, value=0.4)) == 0.4

    def test_factor_of_g_at_zero_coupling(self):
        with pytest.raises(PolicyResolutionError):
            resolve_width(SystemParams(omega_a=1.0, g=0.0), CutoffPolicy(value=10))

    def test_factor_of_detuning_on_resonance(self):
        policy = CutoffPolicy(mode=CutoffMode.FACTOR_OF_DETUNING, value=10)
        with pytest.raises(PolicyResolutionError):
            resolve_width(SystemParams(omega_a=1.0, g=0.1), policy)


class TestAveragedCouplings:
    """g_r = K(Delta) g and g_ar = K(Sigma) g."""

    def test_zero_coupling(self):
        pair = averaged_couplings(SystemParams(omega_a=1.0, g=0.0), CutoffPolicy())
        assert (pair.g_r, pair.g_ar) == (0.0, 0.0)
        assert pair.ratio is None

    def test_ratio_at_right_edge(self, fig1_point):
        pair = averaged_couplings(fig1_point, CutoffPolicy(value=10))
        assert pair.g_r == pytest.approx(0.1 * math.exp(-0.00005), rel=1e-12)
        assert pair.g_ar == pytest.approx(0.1 * math.exp(-2.01 ** 2 / 2), rel=1e-12)
        assert pair.ratio == pytest.approx(0.1327, abs=1e-3)

    def test_ratio_closed_form_random(self):
        rng = np.random.default_rng(1)
        for _ in range(1000):
            omega_a = rng.uniform(0.0, 3.0)
            g = rng.uniform(1e-3, 0.5)
            omega_K = rng.uniform(0.3, 5.0)
            p = SystemParams(omega_a=omega_a, g=g)
            pair = averaged_couplings(p, CutoffPolicy(mode=CutoffMode.FIXED, value=omega_K))
            expected = math.exp(-(p.sigma ** 2 - p.delta ** 2) / (2 * omega_K ** 2))
            assert pair.ratio == pytest.approx(expected, abs=1e-12)

    def test_counter_rotating_negligible_at_small_coupling(self):
        # Holds up to g ~ 0.033 at Delta = 0.01; at g = 0.05 the ratio is already 3e-4
        for g in np.linspace(0.001, 0.03, 30):
            pair = averaged_couplings(SystemParams.from_detuning(0.01, g=g), CutoffPolicy(value=10))
            assert pair.g_ar / g < 1e-8

        edge = averaged_couplings(SystemParams.from_detuning(0.01, g=0.05), CutoffPolicy(value=10))
        assert edge.g_ar / 0.05 == pytest.approx(math.exp(-(2.01 ** 2) / 0.5), rel=1e-9)

    def test_ordering(self):
        p = SystemParams(omega_a=0.6, g=0.2)
        pair = averaged_couplings(p, CutoffPolicy())
        assert 0 <= pair.g_ar <= pair.g_r <= p.g

    def test_wide_kernel_recovers_full_coupling(self):
        p = SystemParams(omega_a=1.1, g=0.1)
        pair = averaged_couplings(p, CutoffPolicy(mode=CutoffMode.FIXED, value=1e6))
        assert pair.g_r == pytest.approx(0.1, rel=1e-10)
        assert pair.g_ar == pytest.approx(0.1, rel=1e-10)


class TestRegimeCheck:
    """Inequality chains."""

    def test_rwa_chain_satisfied(self):
        report = regime_check(SystemParams(omega_a=1.0, g=0.01), CutoffPolicy(mode=CutoffMode.FIXED, value=1.0))
        assert report.averaging_condition
        assert report.rwa_chain

    def test_rwa_chain_violated(self):
        report = regime_check(SystemParams(omega_a=1.0, g=0.3), CutoffPolicy(value=10))
        assert report.omega_K == pytest.approx(3.0)
        assert not report.rwa_chain

    def test_zero_coupling_satisfies_everything(self):
        report = regime_check(SystemParams(omega_a=1.0, g=0.0), CutoffPolicy())
        assert report.rwa_chain and report.dispersive_rwa_chain and report.ultrastrong_chain
        assert report.omega_K is None

    def test_dispersive_rwa_chain(self):
        p = SystemParams.from_detuning(0.2, g=0.01)
        policy = CutoffPolicy(mode=CutoffMode.FIXED, value=1.0)
        report = regime_check(p, policy)
        assert report.dispersive_rwa_chain
        assert report.regime == "dispersive-rwa"

    def test_ultrastrong_chain(self):
        p = SystemParams.from_detuning(0.5, g=0.04)
        report = regime_check(p, CutoffPolicy(mode=CutoffMode.FACTOR_OF_DETUNING, value=10))
        assert report.ultrastrong_chain
        assert not report.dispersive_rwa_chain


if __name__ == "__main__":
    pytest.main([__file__, "-v"])
