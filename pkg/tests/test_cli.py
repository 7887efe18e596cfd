import subprocess
import sys

import numpy as np
import pytest

from entdyn import cli
from helpers import read_csv


def run(tmp_path, *argv, name="out.csv"):
    out = tmp_path / name
    code = cli.main([*argv, "--out", str(out)])
    return code, out


class TestTrajectoryScenarios:
    def test_oscillation_rows(self, tmp_path):
        code, out = run(tmp_path, "fig1", "--t-max", "3.1416", "--steps", "200")
        assert code == 0
        header, rows = read_csv(out)
        assert header == ["t", "concurrence"]
        assert len(rows) == 201
        quarter = rows[50]
        assert abs(quarter[0] - 0.7854) <= 1e-4
        assert abs(quarter[1] - 1.0) <= 1e-6
        for t, c in rows:
            assert abs(c - abs(np.sin(2 * t))) <= 1e-6

    def test_oscillation_sign_convention_irrelevant(self, tmp_path):
        _, plus = run(tmp_path, "fig1", "--steps", "40", name="plus.csv")
        _, minus = run(tmp_path, "fig1", "--steps", "40", "--sign", "-1", name="minus.csv")
        _, rows_plus = read_csv(plus)
        _, rows_minus = read_csv(minus)
        for a, b in zip(rows_plus, rows_minus):
            assert abs(a[1] - b[1]) <= 1e-9

    def test_decay_rows(self, tmp_path):
        code, out = run(tmp_path, "fig2", "--t-max", "5", "--steps", "100")
        assert code == 0
        header, rows = read_csv(out)
        assert header == ["t", "concurrence"]
        assert len(rows) == 101
        assert abs(rows[20][0] - 1.0) <= 1e-12
        assert abs(rows[20][1] - 0.367879) <= 1e-6
        for t, c in rows:
            assert abs(c - np.exp(-t)) <= 1e-6

    def test_drive_only_decay(self, tmp_path):
        code, out = run(tmp_path, "fig-nogo")
        assert code == 0
        header, rows = read_csv(out)
        assert header == ["y", "t", "concurrence", "bloch_norm"]
        seen = sorted({row[0] for row in rows})
        assert seen == [0.5, 1.0, 5.0]
        for y in seen:
            final = [row for row in rows if row[0] == y][-1]
            assert final[1] == 20.0
            assert final[2] < 1e-6
            assert final[3] < 1e-6

    def test_drive_only_rejects_zero_coupling(self, tmp_path):
        code, _ = run(tmp_path, "fig-nogo", "--y", "0")
        assert code == 1

    def test_evolve_settles_to_fixed_point(self, tmp_path):
        code, out = run(tmp_path, "evolve", "--t-max", "8", "--steps", "80")
        assert code == 0
        header, rows = read_csv(out)
        assert header == ["t", "concurrence", "purity"]
        assert abs(rows[-1][1] - 2.0 / 3.0) <= 1e-3
        assert abs(rows[-1][2] - 13.0 / 18.0) <= 1e-3


class TestGridScenarios:
    def test_strong_feedback_cell(self, tmp_path):
        code, out = run(tmp_path, "fig4")
        assert code == 0
        header, rows = read_csv(out)
        assert header == ["m", "f", "concurrence", "log10_one_minus_concurrence"]
        assert len(rows) == 81 * 81
        best = min(rows, key=lambda row: abs(row[0] - 100.0) + abs(row[1] - 100.0))
        assert best[2] >= 0.99
        assert abs(best[3] - np.log10(1.0 - best[2])) <= 1e-6

    def test_sweep_with_splitting(self, tmp_path):
        code, out = run(tmp_path, "sweep", "--points", "5", "--mu", "1")
        assert code == 0
        header, rows = read_csv(out)
        assert header == ["m", "f", "concurrence", "purity", "log10_one_minus_concurrence"]
        assert len(rows) == 25
        for row in rows:
            assert abs(row[3] - 0.5 * (1 + row[2] ** 2)) <= 1e-6


class TestSteadyScenario:
    def test_closed_form_columns_match(self, tmp_path):
        code, out = run(tmp_path, "steady")
        assert code == 0
        header, rows = read_csv(out)
        row = dict(zip(header, rows[0]))
        assert abs(row["concurrence"] - 2.0 / 3.0) <= 1e-9
        assert abs(row["purity"] - 13.0 / 18.0) <= 1e-9
        assert abs(row["concurrence"] - row["concurrence_closed_form"]) <= 1e-9
        assert abs(row["purity"] - row["purity_closed_form"]) <= 1e-9

    def test_closed_form_absent_with_coupling(self, tmp_path):
        code, out = run(tmp_path, "steady", "--y", "0.5")
        assert code == 0
        header, rows = read_csv(out)
        row = dict(zip(header, rows[0]))
        assert np.isnan(row["concurrence_closed_form"])
        assert np.isnan(row["purity_closed_form"])

    def test_degenerate_point_exits_two(self, tmp_path):
        code, _ = run(tmp_path, "steady", "--f", "0")
        assert code == 2


class TestConfigHandling:
    def test_deterministic_output(self, tmp_path):
        _, first = run(tmp_path, "fig2", name="a.csv")
        _, second = run(tmp_path, "fig2", name="b.csv")
        assert first.read_bytes() == second.read_bytes()

    def test_flag_overrides_file_overrides_default(self, tmp_path):
        config = tmp_path / "run.conf"
        config.write_text("m = 1\nf = 3  # file value\n")
        code, out = run(tmp_path, "steady", "--config", str(config), "--m", "2")
        assert code == 0
        header, rows = read_csv(out)
        row = dict(zip(header, rows[0]))
        assert row["m"] == 2.0
        assert row["f"] == 3.0
        assert row["gamma"] == 1.0

    def test_negative_rate_rejected(self, tmp_path):
        code, _ = run(tmp_path, "fig2", "--gamma", "-1")
        assert code == 1

    def test_unknown_config_key_rejected(self, tmp_path):
        config = tmp_path / "run.conf"
        config.write_text("zeta = 3\n")
        code, _ = run(tmp_path, "fig2", "--config", str(config))
        assert code == 1

    def test_duplicate_config_key_rejected(self, tmp_path):
        config = tmp_path / "run.conf"
        config.write_text("gamma = 1\ngamma = 2\n")
        code, _ = run(tmp_path, "fig2", "--config", str(config))
        assert code == 1

    def test_missing_config_file_rejected(self, tmp_path):
        code, _ = run(tmp_path, "fig2", "--config", str(tmp_path / "nope.conf"))
        assert code == 1

    def test_foreign_parameter_rejected(self, tmp_path):
        code, _ = run(tmp_path, "fig1", "--mu", "1")
        assert code == 1

    def test_multiple_couplings_rejected_outside_sweep(self, tmp_path):
        code, _ = run(tmp_path, "evolve", "--y", "1", "--y", "2")
        assert code == 1

    def test_zero_steps_rejected(self, tmp_path):
        code, _ = run(tmp_path, "fig1", "--steps", "0")
        assert code == 1

    def test_single_grid_point_rejected(self, tmp_path):
        code, _ = run(tmp_path, "sweep", "--points", "1")
        assert code == 1

    def test_grid_ceiling_below_floor_rejected(self, tmp_path):
        code, _ = run(tmp_path, "fig4", "--m-max", "0.05")
        assert code == 1

    def test_default_output_name(self, tmp_path, monkeypatch):
        monkeypatch.chdir(tmp_path)
        assert cli.main(["fig1", "--steps", "4"]) == 0
        assert (tmp_path / "fig1.csv").exists()

    def test_help_exits_cleanly(self, capsys):
        with pytest.raises(SystemExit) as excinfo:
            cli.main(["--help"])
        assert excinfo.value.code == 0
        assert "scenarios" in capsys.readouterr().out


class TestEntryPoint:
    def test_module_invocation(self, tmp_path):
        out = tmp_path / "cli.csv"
        result = subprocess.run(
            [sys.executable, "-m", "entdyn", "fig1", "--steps", "10", "--out", str(out)],
            cwd=tmp_path,
            capture_output=True,
            text=True,
            timeout=60,
        )
        assert result.returncode == 0
        assert "wrote" in result.stderr
        assert result.stdout == ""
        assert out.exists()
