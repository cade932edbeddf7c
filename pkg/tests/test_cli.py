import json
import math
import os

import numpy as np
import pytest

from quasicat.cli import main


def _read_summary(out_dir):
    with open(os.path.join(out_dir, "summary.json")) as handle:
        return json.load(handle)


def _read_rows(out_dir, name="timeseries.csv"):
    with open(os.path.join(out_dir, name)) as handle:
        return handle.read().splitlines()


def _strip_wall_clock(path):
    with open(path, "rb") as handle:
        raw = handle.read()
    return b"\n".join(
        line for line in raw.splitlines() if b"wall_clock_s" not in line
    )


def test_validate_scenario_passes(tmp_path):
    out = str(tmp_path / "v")
    assert main(["validate", "--out", out, "--trials", "2"]) == 0
    payload = _read_summary(out)
    assert payload["scenario"] == "validate"
    assert payload["summary"]["all_passed"] is True
    assert payload["summary"]["max_residual"] < 1e-6
    checks = payload["summary"]["checks"]
    assert set(checks) >= {
        "amplitude_round_trip",
        "rotation_operator_vs_amplitudes",
        "quasi_jc_rotation",
        "basis_equivalence_evolution",
        "squeeze_operator_identity",
        "decouple_eigenvalues",
    }
    rows = _read_rows(out)
    assert rows[0] == "check_index,residual"
    assert len(rows) == 1 + len(checks)


def test_zero_detuning_outputs(tmp_path):
    out = str(tmp_path / "z")
    code = main(
        ["zero-detuning", "--out", out, "--nbar", "4", "--t-steps", "6"]
    )
    assert code == 0
    rows = _read_rows(out)
    assert rows[0] == "t,atomic_inversion,atomic_purity,cat_fidelity,mean_photon_mode_i"
    assert len(rows) == 1 + 6
    payload = _read_summary(out)
    s = payload["summary"]
    # default couplings g1 = g2 = 1 add in quadrature
    assert s["g_total"] == pytest.approx(math.sqrt(2.0))
    assert s["revival_time"] == pytest.approx(2 * math.pi * 2.0 / s["g_total"])
    assert s["protocol_time"] == pytest.approx(s["revival_time"] / 2.0)
    assert 0.0 <= s["cat_fidelity_at_protocol"] <= 1.0
    assert 0.5 <= s["atomic_purity_at_protocol"] <= 1.0
    assert s["cat_convention_best"] in (-1, 1)


def test_large_detuning_outputs(tmp_path):
    out = str(tmp_path / "l")
    code = main(
        [
            "large-detuning",
            "--out",
            out,
            "--nbar",
            "1",
            "--ratio",
            "20",
            "--t-steps",
            "4",
        ]
    )
    assert code == 0
    rows = _read_rows(out)
    assert rows[0] == "t,effective_vs_oracle_fidelity,atomic_inversion"
    assert len(rows) == 1 + 4
    s = _read_summary(out)["summary"]
    assert s["prob_sum"] == pytest.approx(1.0, abs=1e-9)
    assert s["t_prime"] == pytest.approx(math.pi * 10.0)
    assert 0.0 <= s["effective_fidelity_at_t_prime"] <= 1.0


def test_adiabatic_sweep_outputs(tmp_path):
    out = str(tmp_path / "a")
    assert main(["adiabatic-sweep", "--out", out, "--ratios", "25,50"]) == 0
    rows = _read_rows(out)
    assert rows[0] == (
        "delta_over_g,residual,residual_relative,"
        "mode_residual,lowering_residual,inversion_residual"
    )
    assert len(rows) == 3
    s = _read_summary(out)["summary"]
    assert len(s["residuals"]) == 2
    assert s["shrink_factors"][0] == pytest.approx(4.0, rel=0.25)


def test_qfunc_outputs(tmp_path):
    out = str(tmp_path / "q")
    assert main(["qfunc", "--out", out, "--nbar", "4", "--grid-points", "41"]) == 0
    grid_rows = _read_rows(out, "qgrid.csv")
    assert grid_rows[0].startswith("im/re,")
    assert len(grid_rows[0].split(",")) == 1 + 41
    assert len(grid_rows) == 1 + 41
    s = _read_summary(out)["summary"]
    assert s["q_max"] <= 1.0 / math.pi + 1e-12
    assert s["grid_integral"] == pytest.approx(1.0, rel=0.02)
    lobes = sorted(p["im"] for p in s["peaks"])
    assert lobes[0] == pytest.approx(-2.0, abs=0.2)
    assert lobes[-1] == pytest.approx(2.0, abs=0.2)


def test_missing_config_file_is_config_error(tmp_path, capsys):
    code = main(
        ["validate", "--config", str(tmp_path / "nope.cfg"), "--out", str(tmp_path)]
    )
    assert code == 2
    assert "config error" in capsys.readouterr().err


def test_unknown_config_key_is_config_error(tmp_path):
    cfg = tmp_path / "bad.cfg"
    cfg.write_text("bogus = 1\n")
    assert main(["validate", "--config", str(cfg), "--out", str(tmp_path)]) == 2


def test_malformed_config_line_is_config_error(tmp_path):
    cfg = tmp_path / "bad.cfg"
    cfg.write_text("just a line without equals\n")
    assert main(["validate", "--config", str(cfg), "--out", str(tmp_path)]) == 2


def test_negative_nbar_is_config_error(tmp_path):
    out = str(tmp_path / "n")
    assert main(["zero-detuning", "--out", out, "--nbar", "-3"]) == 2


def test_small_ratio_is_numeric_error(tmp_path, capsys):
    out = str(tmp_path / "r")
    code = main(["large-detuning", "--out", out, "--nbar", "1", "--ratio", "2"])
    assert code == 3
    assert "run error" in capsys.readouterr().err


def test_unnormalized_atom_is_numeric_error(tmp_path):
    out = str(tmp_path / "u")
    code = main(
        [
            "zero-detuning",
            "--out",
            out,
            "--nbar",
            "4",
            "--gamma-re",
            "1",
            "--delta-amp-re",
            "1",
        ]
    )
    assert code == 3


def test_flags_override_config_file(tmp_path):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("# comment line\nnbar = 4\nt_steps = 5\n")
    out = str(tmp_path / "o")
    code = main(
        [
            "zero-detuning",
            "--config",
            str(cfg),
            "--out",
            out,
            "--t-steps",
            "7",
        ]
    )
    assert code == 0
    assert len(_read_rows(out)) == 1 + 7
    payload = _read_summary(out)
    assert payload["config"]["nbar"] == 4.0
    assert payload["config"]["t_steps"] == 7


def test_reruns_are_bit_identical(tmp_path):
    out = str(tmp_path / "d")
    args = ["validate", "--out", out, "--trials", "2", "--seed", "777"]
    assert main(args) == 0
    first_summary = _strip_wall_clock(os.path.join(out, "summary.json"))
    with open(os.path.join(out, "timeseries.csv"), "rb") as handle:
        first_rows = handle.read()
    assert main(args) == 0
    second_summary = _strip_wall_clock(os.path.join(out, "summary.json"))
    with open(os.path.join(out, "timeseries.csv"), "rb") as handle:
        second_rows = handle.read()
    assert first_summary == second_summary
    assert first_rows == second_rows


def test_different_seed_changes_random_checks(tmp_path):
    out_a = str(tmp_path / "s1")
    out_b = str(tmp_path / "s2")
    assert main(["validate", "--out", out_a, "--trials", "2", "--seed", "1"]) == 0
    assert main(["validate", "--out", out_b, "--trials", "2", "--seed", "2"]) == 0
    a = _read_summary(out_a)["summary"]["checks"]
    b = _read_summary(out_b)["summary"]["checks"]
    assert a["amplitude_round_trip"] != b["amplitude_round_trip"]


def test_timeseries_values_are_finite(tmp_path):
    out = str(tmp_path / "f")
    assert main(["zero-detuning", "--out", out, "--nbar", "4", "--t-steps", "5"]) == 0
    body = np.loadtxt(
        os.path.join(out, "timeseries.csv"), delimiter=",", skiprows=1
    )
    assert np.isfinite(body).all()
