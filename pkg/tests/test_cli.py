"""Tests for the command-line interface and config handling."""

import json

import numpy as np
import pytest

from vacuum_cavity_forces.cli import main
from vacuum_cavity_forces.config import (
    CHI_COLUMNS,
    ConfigError,
    load_scenario,
    validate_output,
)

BASE_CONFIG = {
    "cavity": {
        "q": 1.0,
        "m1": {"variant": "lorentzian", "omega_c": 3.0},
        "m2": {"variant": "lorentzian", "omega_c": 5.0},
    },
    "frequency_grid": {"min": 0.5, "max": 3.0, "count": 4},
    "quadrature": {"rel_tol": 1e-7},
}

RESPONSE_CONFIG = {
    "cavity": {
        "q": 1.0,
        "m1": {"variant": "lorentzian", "omega_c": 100.0},
        "m2": {"variant": "lorentzian", "omega_c": 100.0},
    },
    "time_grid": {"t0": 0.0, "dt": 0.015625, "n": 1024},
    "time_response": {
        "method": "resonance_approx",
        "echo_count": 4,
        "trajectory": {"mirror": 1, "shape": "gaussian", "center": 4.0,
                       "width": 0.1, "amplitude": 1e-4},
    },
}


def _write(tmp_path, cfg, name="cfg.json"):
    path = tmp_path / name
    path.write_text(json.dumps(cfg))
    return str(path)


class TestConfig:
    def test_unknown_key_rejected(self, tmp_path):
        cfg = dict(BASE_CONFIG, bogus=1)
        with pytest.raises(ConfigError, match="schema"):
            load_scenario(_write(tmp_path, cfg))

    def test_unknown_mirror_variant_rejected(self, tmp_path):
        cfg = json.loads(json.dumps(BASE_CONFIG))
        cfg["cavity"]["m1"] = {"variant": "chrome"}
        with pytest.raises(ConfigError):
            load_scenario(_write(tmp_path, cfg))

    def test_nonpositive_q_rejected(self, tmp_path):
        cfg = json.loads(json.dumps(BASE_CONFIG))
        cfg["cavity"]["q"] = -1.0
        with pytest.raises(ConfigError):
            load_scenario(_write(tmp_path, cfg))

    def test_missing_file(self, tmp_path):
        with pytest.raises(ConfigError, match="cannot read"):
            load_scenario(tmp_path / "nope.json")

    def test_bad_json(self, tmp_path):
        path = tmp_path / "broken.json"
        path.write_text("{not json")
        with pytest.raises(ConfigError, match="not valid JSON"):
            load_scenario(path)

    def test_si_units_convert_spacing(self, tmp_path):
        cfg = json.loads(json.dumps(BASE_CONFIG))
        cfg["units"] = "si"
        cfg["cavity"]["q"] = 299792458.0  # one light-second, in meters
        scn = load_scenario(_write(tmp_path, cfg))
        assert scn.cavity.q == pytest.approx(1.0)
        assert scn.cavity.hbar == pytest.approx(1.054571817e-34)
        assert scn.force_scale == pytest.approx(1.0 / 299792458.0)


class TestExitCodes:
    def test_config_error_is_2(self, tmp_path, capsys):
        assert main(["static-force", "--config",
                     str(tmp_path / "missing.json")]) == 2

    def test_json_only_command_rejects_csv(self, tmp_path):
        cfg = _write(tmp_path, BASE_CONFIG)
        assert main(["resonance-compare", "--config", cfg,
                     "--format", "csv"]) == 2

    def test_figures_require_out(self, tmp_path):
        cfg = _write(tmp_path, BASE_CONFIG)
        assert main(["static-force", "--config", cfg, "--figures"]) == 2

    def test_numerical_failure_is_3(self, tmp_path, capsys):
        cfg = json.loads(json.dumps(BASE_CONFIG))
        cfg["quadrature"] = {"rel_tol": 1e-15, "max_subdivisions": 1}
        code = main(["static-force", "--config", _write(tmp_path, cfg)])
        assert code == 3
        assert "numerical failure" in capsys.readouterr().err


class TestCsvOutput:
    def test_static_force_columns(self, tmp_path, capsys):
        assert main(["static-force", "--config",
                     _write(tmp_path, BASE_CONFIG)]) == 0
        out = capsys.readouterr().out
        lines = out.split("\r\n")
        assert lines[0].startswith("# vacuum-cavity-forces v")
        assert lines[0].endswith("schema=force-v1")
        assert lines[1] == "F1,F2,error_bound"
        f1, f2, err = (float(tok) for tok in lines[2].split(","))
        assert f1 == -f2 and f1 > 0.0 and err >= 0.0

    def test_susceptibility_columns(self, tmp_path, capsys):
        cfg = json.loads(json.dumps(BASE_CONFIG))
        cfg["susceptibility"] = {"method": "resonance_approx"}
        assert main(["susceptibility", "--config",
                     _write(tmp_path, cfg)]) == 0
        lines = capsys.readouterr().out.split("\r\n")
        assert lines[1] == ",".join(CHI_COLUMNS)
        assert len(lines[2].split(",")) == len(CHI_COLUMNS)

    def test_determinism_byte_identical(self, tmp_path):
        cfg = json.loads(json.dumps(BASE_CONFIG))
        cfg["susceptibility"] = {"method": "resonance_approx"}
        path = _write(tmp_path, cfg)
        out_a, out_b = tmp_path / "a.csv", tmp_path / "b.csv"
        assert main(["susceptibility", "--config", path,
                     "--out", str(out_a)]) == 0
        assert main(["susceptibility", "--config", path,
                     "--out", str(out_b)]) == 0
        assert out_a.read_bytes() == out_b.read_bytes()

    def test_thread_fanout_is_deterministic(self, tmp_path, monkeypatch):
        cfg = json.loads(json.dumps(BASE_CONFIG))
        cfg["susceptibility"] = {"method": "resonance_approx"}
        path = _write(tmp_path, cfg)
        out_a, out_b = tmp_path / "a.csv", tmp_path / "b.csv"
        assert main(["susceptibility", "--config", path,
                     "--out", str(out_a)]) == 0
        monkeypatch.setenv("VCF_THREADS", "4")
        assert main(["susceptibility", "--config", path,
                     "--out", str(out_b)]) == 0
        assert out_a.read_bytes() == out_b.read_bytes()


class TestJsonOutput:
    def test_resonance_compare_round_trip(self, tmp_path, capsys):
        assert main(["resonance-compare", "--config",
                     _write(tmp_path, BASE_CONFIG)]) == 0
        report = json.loads(capsys.readouterr().out)
        validate_output(report)
        assert report["element"] == [1, 1]
        for entry in report["entries"]:
            assert entry["omega_star"] == pytest.approx(entry["k"] * np.pi)

    def test_validate_mirror_round_trip(self, tmp_path, capsys):
        cfg = json.loads(json.dumps(BASE_CONFIG))
        cfg["frequency_grid"] = {"min": 0.05, "max": 50.0, "count": 60}
        assert main(["validate-mirror", "--config",
                     _write(tmp_path, cfg)]) == 0
        report = json.loads(capsys.readouterr().out)
        validate_output(report)
        assert report["reality_pass"] and report["unitarity_pass"]

    def test_static_force_json_round_trip(self, tmp_path, capsys):
        assert main(["static-force", "--config", _write(tmp_path, BASE_CONFIG),
                     "--format", "json"]) == 0
        report = json.loads(capsys.readouterr().out)
        validate_output(report)
        assert len(report["rows"]) == 1

    def test_time_response_echo_parity(self, tmp_path, capsys):
        assert main(["time-response", "--config",
                     _write(tmp_path, RESPONSE_CONFIG),
                     "--format", "json"]) == 0
        report = json.loads(capsys.readouterr().out)
        validate_output(report)
        assert len(report["rows"]) == 1024
        for echo in report["echoes"]:
            if echo["component"] == 1:
                assert echo["absent"] == (echo["k"] % 2 == 1)
            else:
                assert echo["absent"] == (echo["k"] % 2 == 0)


class TestFigures:
    def test_figure_rendered_next_to_out(self, tmp_path):
        cfg = json.loads(json.dumps(BASE_CONFIG))
        cfg["susceptibility"] = {"method": "resonance_approx"}
        out = tmp_path / "chi.csv"
        assert main(["susceptibility", "--config", _write(tmp_path, cfg),
                     "--out", str(out), "--figures"]) == 0
        assert (tmp_path / "chi.png").exists()

    def test_response_figure(self, tmp_path):
        out = tmp_path / "resp.csv"
        assert main(["time-response", "--config",
                     _write(tmp_path, RESPONSE_CONFIG),
                     "--out", str(out), "--figures"]) == 0
        assert (tmp_path / "resp.png").exists()


class TestSiUnits:
    def test_si_force_is_natural_force_over_c(self, tmp_path, capsys):
        c = 299792458.0
        hbar = 1.054571817e-34
        nat = json.loads(json.dumps(BASE_CONFIG))
        nat["cavity"]["hbar"] = hbar
        assert main(["static-force", "--config",
                     _write(tmp_path, nat, "nat.json")]) == 0
        f_nat = float(capsys.readouterr().out.split("\r\n")[2].split(",")[0])
        si = json.loads(json.dumps(BASE_CONFIG))
        si["units"] = "si"
        si["cavity"]["q"] = c  # same spacing, expressed in meters
        assert main(["static-force", "--config",
                     _write(tmp_path, si, "si.json")]) == 0
        f_si = float(capsys.readouterr().out.split("\r\n")[2].split(",")[0])
        assert f_si == pytest.approx(f_nat / c, rel=1e-12)
