"""
Tests for the command-line front end: config merging, CSV output and exit codes.

Run with: pytest tests/test_cli.py
"""

import sys
import os
sys.path.append(os.path.abspath(os.path.join(os.path.dirname(__file__), '..')))

import csv
import math

import pytest
from pydantic import ValidationError
from unittest.mock import patch

from app.config import Config, load_config_file
from app.errors import ConfigError, ConvergenceError
from app.main import (
    EXIT_FLAGGED_ROWS,
    EXIT_INVALID_CONFIG,
    EXIT_NUMERICAL_FAILURE,
    EXIT_OK,
    build_config,
    build_parser,
    format_value,
    main,
)
from app.models import CutoffMode, DetuningMode, RowResult, Variant
from app.presets import PRESETS, get_preset


def parse(*argv):
    return build_parser().parse_args(list(argv))


def read_csv(path):
    with open(path, newline="", encoding="utf-8") as stream:
        return list(csv.reader(stream))


class TestPresets:
    """Figure presets."""

    def test_all_figures_present(self):
        for name in ("fig1", "fig2", "fig3a", "fig3b", "fig4a", "fig4b", "fig5a", "fig5b"):
            assert name in PRESETS

    @pytest.mark.parametrize("name", sorted(PRESETS))
    def test_presets_build(self, name):
        config = build_config(parse(PRESETS[name]["command"], "--preset", name))
        assert config.command == PRESETS[name]["command"]

    def test_caption_parameters(self):
        fig1 = build_config(parse("cutoff", "--preset", "fig1"))
        assert fig1.delta_policy.value == 0.01
        assert fig1.cutoff_policy.mode == CutoffMode.FACTOR_OF_G
        assert fig1.steps == 101

        fig2 = build_config(parse("spectrum", "--preset", "fig2"))
        assert (fig2.grid_min, fig2.grid_max, fig2.steps) == (0.0, 0.3, 61)

        fig3b = build_config(parse("dispersive", "--preset", "fig3b"))
        assert fig3b.delta_policy.mode == DetuningMode.FACTOR
        assert fig3b.delta_policy.value == -10
        assert fig3b.cutoff_policy.mode == CutoffMode.FACTOR_OF_DETUNING

    def test_unknown_preset(self):
        with pytest.raises(ConfigError):
            get_preset("fig9")

    def test_preset_for_other_command(self):
        with pytest.raises(ConfigError):
            build_config(parse("spectrum", "--preset", "fig1"))


class TestBuildConfig:
    """Precedence: flags > config file > preset > defaults."""

    def test_defaults(self):
        config = build_config(parse("twoqubit"))
        assert config.steps == 11
        assert config.variant == Variant.RWA
        assert config.fock == "auto"

    def test_flag_overrides_preset(self):
        config = build_config(parse("cutoff", "--preset", "fig1", "--g-steps", "5"))
        assert config.steps == 5
        assert config.grid_max == 0.1

    def test_file_between_preset_and_flags(self, tmp_path):
        path = tmp_path / "sweep.conf"
        path.write_text("g-max=0.05\nG_STEPS=7\nfock=30\n")

        config = build_config(parse("cutoff", "--preset", "fig1", "--config", str(path), "--g-steps", "3"))
        assert config.grid_max == 0.05
        assert config.steps == 3
        assert config.fock == 30

    def test_omega_a_flag_replaces_detuning_policy(self):
        config = build_config(parse("dispersive", "--preset", "fig3a", "--omega-a", "1.3"))
        assert config.omega_a == 1.3
        assert config.params_at(0.02).delta == pytest.approx(0.3)

    def test_evolve_sweeps_time_by_default(self):
        config = build_config(parse("evolve", "--g", "0.02", "--g-max", "10"))
        assert config.sweep == "t"
        assert config.params_at(5.0).g == 0.02
        assert build_config(parse("cutoff")).sweep == "g"

    @pytest.mark.parametrize(
        "argv",
        [
            ("evolve", "--sweep", "g", "--g", "0.02"),
            ("evolve", "--sweep", "delta", "--g", "0.02"),
            ("evolve", "--g-max", "10"),
            ("cutoff", "--sweep", "t", "--g", "0.1"),
            ("dispersive", "--sweep", "t", "--g", "0.1"),
            ("twoqubit", "--sweep", "t", "--g", "0.1"),
            ("regime", "--sweep", "t", "--g", "0.1"),
        ],
    )
    def test_time_sweeps_belong_to_evolve(self, argv):
        with pytest.raises(ValidationError):
            build_config(parse(*argv))

    def test_malformed_policy(self):
        with pytest.raises(ConfigError):
            build_config(parse("cutoff", "--cutoff-policy", "factor_of_g"))

    def test_unknown_file_key(self, tmp_path):
        path = tmp_path / "bad.conf"
        path.write_text("colour=blue\n")
        with pytest.raises(Exception) as exc_info:
            build_config(parse("cutoff", "--config", str(path)))
        assert "colour" in str(exc_info.value)

    def test_missing_file(self, tmp_path):
        with pytest.raises(ConfigError):
            load_config_file(tmp_path / "absent.conf")

    def test_bad_flag_raises_config_error(self):
        with pytest.raises(ConfigError):
            parse("cutoff", "--no-such-flag")


class TestFormatting:
    """Deterministic CSV cells."""

    def test_values(self):
        assert format_value(None) == ""
        assert format_value(True) == "true"
        assert format_value(-0.0) == "0"
        assert format_value(0.1 + 0.2) == "0.3"
        assert format_value(1.0 / 3.0) == "0.333333333333"
        assert format_value("0+") == "0+"

    def test_config_validate(self):
        Config.validate()
        with patch.object(Config, "FOCK_CAP", 5):
            with pytest.raises(ConfigError):
                Config.validate()


class TestMain:
    """End-to-end runs and exit codes."""

    def test_fig1_preset(self, tmp_path):
        out = tmp_path / "fig1.csv"
        assert main(["cutoff", "--preset", "fig1", "--out", str(out)]) == EXIT_OK

        rows = read_csv(out)
        assert rows[0] == ["g_over_wr", "g_r", "g_ar", "ratio", "flag"]
        assert len(rows) == 102
        assert rows[1][3] == "" and rows[1][4]
        assert float(rows[-1][3]) == pytest.approx(0.1327, abs=1e-3)

    def test_flagged_rows_exit_code(self, tmp_path):
        out = tmp_path / "flagged.csv"
        argv = ["cutoff", "--g-min", "0", "--g-max", "0.1", "--g-steps", "3", "--out", str(out)]
        assert main(argv) == EXIT_FLAGGED_ROWS
        assert main(argv + ["--allow-flagged"]) == EXIT_OK

    def test_stdout_output(self, capsys):
        code = main(
            ["twoqubit", "--delta-policy", "factor:10", "--cutoff-policy", "factor_of_detuning:10",
             "--g-min", "0.01", "--g-max", "0.02", "--g-steps", "2"]
        )
        assert code == EXIT_OK
        lines = capsys.readouterr().out.splitlines()
        assert lines[0].startswith("g_over_wr,J_rwa,J_nr0")
        assert len(lines) == 3

    def test_invalid_values(self):
        assert main(["cutoff", "--g-steps", "0"]) == EXIT_INVALID_CONFIG
        assert main(["cutoff", "--g-min", "0.2", "--g-max", "0.1"]) == EXIT_INVALID_CONFIG
        assert main(["cutoff", "--bogus"]) == EXIT_INVALID_CONFIG
        assert main(["cutoff", "--preset", "nope"]) == EXIT_INVALID_CONFIG

    def test_evolve_reaches_sqrt_iswap_time(self, tmp_path):
        g, delta = 0.02, 0.2
        out = tmp_path / "evolve.csv"
        code = main(
            ["evolve", "--g", str(g), "--delta-policy", f"fixed:{delta}", "--g-min", "0",
             "--g-max", repr(math.pi * delta / (4 * g ** 2)), "--g-steps", "2", "--out", str(out)]
        )
        assert code == EXIT_OK

        rows = read_csv(out)
        assert rows[0][0] == "t"
        assert rows[0][-2] == "fidelity_to_sqrt_iswap"
        assert float(rows[-1][-2]) >= 1 - 1e-10

    def test_evolve_rejects_coupling_sweep(self):
        argv = ["evolve", "--sweep", "g", "--g", "0.02", "--g-max", "10"]
        assert main(argv) == EXIT_INVALID_CONFIG

    def test_numerical_failure(self):
        with patch("app.main.SweepRunner.run", side_effect=ConvergenceError(n_max=200, last_delta=1.0)):
            assert main(["cutoff", "--g-min", "0.01"]) == EXIT_NUMERICAL_FAILURE

    def test_unwritable_output(self, tmp_path):
        out = tmp_path / "missing" / "out.csv"
        assert main(["cutoff", "--g-min", "0.01", "--out", str(out)]) == EXIT_INVALID_CONFIG

    def test_byte_identical_across_runs_and_workers(self, tmp_path):
        base = ["dispersive", "--preset", "fig3a", "--g-steps", "4"]
        first, second = tmp_path / "a.csv", tmp_path / "b.csv"
        assert main(base + ["--workers", "1", "--out", str(first)]) == EXIT_OK
        assert main(base + ["--workers", "3", "--out", str(second)]) == EXIT_OK
        assert first.read_bytes() == second.read_bytes()

    def test_flagged_row_keeps_x_value(self, tmp_path):
        out = tmp_path / "disp.csv"
        code = main(
            ["dispersive", "--delta-policy", "factor:10", "--g-min", "0", "--g-max", "0.02",
             "--g-steps", "2", "--allow-flagged", "--out", str(out)]
        )
        assert code == EXIT_OK
        rows = read_csv(out)
        assert rows[1][0] == "0"
        assert rows[1][1:-1] == [""] * 5
        assert rows[1][-1]


class TestRowResult:
    """Per-row result record."""

    def test_defaults(self):
        result = RowResult(x=0.1, success=True)
        assert result.records == []
        assert result.error is None


if __name__ == "__main__":
    pytest.main([__file__, "-v"])
