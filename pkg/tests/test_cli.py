import json
import math
import subprocess
import sys

import numpy as np
import pytest

from fluxring import io
from fluxring.cli import main
from fluxring.model import CONFIG_SCHEMA_VERSION

TWO_PI = 2.0 * math.pi


def short_classical_config(tmp_path, **overrides):
    classical = {
        "rho0": 1.0, "v0": 1.0, "b_final": 0.0,
        "ramp_time": 6.0, "dt": 1e-3, "t_end": 12.0, "record_stride": 10,
    }
    classical.update(overrides)
    doc = {"schema_version": CONFIG_SCHEMA_VERSION, "flux": 1.0 / 3.0,
           "classical": classical}
    path = tmp_path / "config.json"
    path.write_text(json.dumps(doc))
    return path


def test_spectrum_command(tmp_path):
    out = tmp_path / "spectra"
    assert main(["spectrum", "--flux", "0.3333333333333333", "--lmax", "32",
                 "--out", str(out)]) == 0
    summary = json.loads((out / "spectrum_summary.json").read_text())
    assert summary["passed"] is True
    assert summary["max_deviation"] < 1e-8
    table = io.read_table(out / "spectrum_cylindrical.csv")
    assert len(table["l"]) == 17
    assert table["abs_dev"].max() < 1e-8


def test_spectrum_zero_flux_identical_spectra(tmp_path):
    out = tmp_path / "spec0"
    assert main(["spectrum", "--flux", "0", "--out", str(out)]) == 0
    cyl = io.read_table(out / "spectrum_cylindrical.csv")
    lan = io.read_table(out / "spectrum_landau.csv")
    sing = io.read_table(out / "spectrum_singular.csv")
    assert np.abs(cyl["energy"] - lan["energy"]).max() < 1e-10
    assert np.abs(cyl["energy"] - sing["energy"]).max() < 1e-10


def test_spectrum_rejects_small_basis(tmp_path):
    assert main(["spectrum", "--flux", "0.5", "--lmax", "4",
                 "--out", str(tmp_path / "x")]) == 2


def test_spectrum_gauge_subset(tmp_path):
    out = tmp_path / "subset"
    assert main(["spectrum", "--flux", "0.5", "--gauges", "cylindrical,landau",
                 "--out", str(out)]) == 0
    assert (out / "spectrum_cylindrical.csv").exists()
    assert not (out / "spectrum_singular.csv").exists()


def test_figure_command_values(tmp_path):
    out = tmp_path / "fig1.csv"
    assert main(["figure", "--which", "fig1", "--out", str(out)]) == 0
    table = io.read_table(out)
    assert set(table) == {"flux", "phi", "re_psi"}
    first_curve = table["flux"] == table["flux"][0]
    phi = table["phi"][first_curve]
    re = table["re_psi"][first_curve]
    assert re[0] == pytest.approx((TWO_PI) ** -0.5, abs=1e-15)
    assert re[0] == re[-1]  # periodic curve, endpoints bit-equal
    assert phi[-1] == pytest.approx(TWO_PI)


def test_figure_fig3_twisted_endpoints(tmp_path):
    out = tmp_path / "fig3.csv"
    assert main(["figure", "--which", "fig3", "--out", str(out)]) == 0
    table = io.read_table(out)
    dashed = np.isclose(table["flux"], 1.0 / 3.0)
    re = table["re_psi"][dashed]
    # endpoint picks up Re[exp(-2 pi i f)] relative to the start
    assert re[-1] == pytest.approx(re[0] * math.cos(TWO_PI / 3.0), abs=1e-12)
    assert re[0] != re[-1]


def test_verify_quantum_suite(tmp_path):
    out = tmp_path / "verify"
    assert main(["verify", "--suite", "quantum", "--flux", "0.3333333333333333",
                 "--out", str(out)]) == 0
    report = json.loads((out / "report.json").read_text())
    assert report["all_passed"] is True
    names = {c["name"] for c in report["checks"]}
    assert "covariance_hamiltonian" in names
    assert "evolution_equivalence" in names
    assert (out / "spectrum_landau.csv").exists()


def test_verify_runs_are_byte_identical(tmp_path):
    out1, out2 = tmp_path / "v1", tmp_path / "v2"
    assert main(["verify", "--suite", "quantum", "--out", str(out1)]) == 0
    assert main(["verify", "--suite", "quantum", "--out", str(out2)]) == 0
    for name in ("spectrum_cylindrical.csv", "spectrum_landau.csv",
                 "spectrum_singular.csv"):
        assert (out1 / name).read_bytes() == (out2 / name).read_bytes()


def test_verify_tolerance_override_can_fail(tmp_path):
    out = tmp_path / "strict"
    code = main(["verify", "--suite", "quantum",
                 "--tol", "spectrum_gauge_invariance=1e-30", "--out", str(out)])
    assert code == 1
    report = json.loads((out / "report.json").read_text())
    assert report["all_passed"] is False


def test_verify_rejects_unknown_tolerance(tmp_path):
    assert main(["verify", "--suite", "quantum", "--tol", "nope=1",
                 "--out", str(tmp_path / "x")]) == 2


def test_verify_all_suites_with_short_scenario(tmp_path):
    cfg = short_classical_config(tmp_path)
    out = tmp_path / "all"
    assert main(["verify", "--suite", "all", "--config", str(cfg),
                 "--out", str(out)]) == 0
    report = json.loads((out / "report.json").read_text())
    names = {c["name"] for c in report["checks"]}
    assert "spectrum_gauge_invariance" in names
    assert "classical_lz_drift" in names
    assert (out / "trajectory.csv").exists()


def test_classical_command_flat_ledger(tmp_path):
    cfg = short_classical_config(tmp_path)
    out = tmp_path / "orbit"
    assert main(["classical", "--config", str(cfg), "--out", str(out)]) == 0
    table = io.read_table(out / "trajectory.csv")
    assert set(table) == {"t", "rho", "phi", "v_rho", "v_phi",
                          "lz_cyl", "lz_landau", "B"}
    assert np.abs(table["lz_cyl"] - table["lz_cyl"][0]).max() < 1e-8
    assert np.abs(table["B"]).max() == 0.0
    audit = json.loads((out / "audit.json").read_text())
    assert audit["audit"]["max_lz_drift"] < 1e-8


def test_classical_command_bad_config_path(tmp_path):
    assert main(["classical", "--config", str(tmp_path / "missing.json"),
                 "--out", str(tmp_path / "x")]) == 2


def test_unknown_config_field_rejected(tmp_path):
    path = tmp_path / "bad.json"
    path.write_text(json.dumps({"schema_version": 1, "mystery": True}))
    assert main(["verify", "--suite", "quantum", "--config", str(path),
                 "--out", str(tmp_path / "x")]) == 2


def test_json_output_format(tmp_path):
    cfg = short_classical_config(tmp_path)
    doc = json.loads(cfg.read_text())
    doc["output_format"] = "json"
    cfg.write_text(json.dumps(doc))
    out = tmp_path / "orbit_json"
    assert main(["classical", "--config", str(cfg), "--out", str(out)]) == 0
    data = json.loads((out / "trajectory.json").read_text())
    assert "lz_cyl" in data


def test_module_entry_point_runs():
    proc = subprocess.run([sys.executable, "-m", "fluxring", "--version"],
                          capture_output=True, text=True)
    assert proc.returncode == 0
    assert "fluxring" in proc.stdout
