"""End-to-end tests of the command line front end and its report artifacts."""

import json

import numpy as np
import pytest

from hyperstab.cli import ConfigError, build_config, load_profiles, main, run


def read_report(out_dir):
    with open(out_dir / "report.json") as fh:
        return json.load(fh)


# ---------------------------------------------------------------------------
# validation
# ---------------------------------------------------------------------------

def test_config_errors_enumerate_field_paths():
    with pytest.raises(ConfigError) as err:
        build_config("check-theorem1", {"j": 5, "m": 3, "branch": "x", "v_j": {"kind": "nope"}})
    messages = err.value.errors
    assert any(msg.startswith("check-theorem1.j") for msg in messages)
    assert any(msg.startswith("check-theorem1.branch") for msg in messages)
    assert any(msg.startswith("check-theorem1.v_j.kind") for msg in messages)


def test_seed_mandatory_for_fuzz():
    with pytest.raises(ConfigError, match="seed"):
        build_config("verify-algebra", {})


def test_bad_tolerances_rejected():
    with pytest.raises(ConfigError, match="tol"):
        build_config("oscillate", {"tol": -1.0})
    with pytest.raises(ConfigError, match="t_max"):
        build_config("oscillate", {"t_max": 0.0})


def test_unknown_subcommand():
    with pytest.raises(ConfigError):
        build_config("frobnicate", {})


# ---------------------------------------------------------------------------
# subcommand runs
# ---------------------------------------------------------------------------

def test_verify_algebra_run(tmp_path):
    cfg = build_config("verify-algebra", {"seed": 42, "samples": 150, "out": str(tmp_path)})
    report = run(cfg)
    assert report.stages["trace_identities"]["pass"]
    assert report.stages["trace_identities"]["max_relative_residual"] <= 1e-10
    assert (tmp_path / "identity_residuals.csv").exists()
    assert (tmp_path / "identity_residuals.png").exists()
    assert read_report(tmp_path)["stages"]["newton_inequalities"]["pass"]


def test_oscillate_run_writes_zero_table(tmp_path):
    cfg = build_config(
        "oscillate",
        {"v": {"kind": "power", "exponent": 2}, "A": {"kind": "constant", "value": 1.0},
         "t_max": 10.0, "out": str(tmp_path)},
    )
    report = run(cfg)
    zeros = report.stages["solve"]["zeros"]
    np.testing.assert_allclose(zeros, [np.pi, 2 * np.pi, 3 * np.pi], atol=1e-6)
    assert (tmp_path / "solution.csv").exists()
    assert (tmp_path / "solution.png").exists()
    rows = (tmp_path / "zeros.csv").read_text().strip().splitlines()
    assert len(rows) == 4  # header + 3 zeros


def test_theorem1_pipeline_emits_conclusion(tmp_path):
    cfg = build_config("check-theorem1", {"out": str(tmp_path)})
    report = run(cfg)
    assert report.stages["hypotheses"]["overall"] == "SATISFIED"
    assert report.conclusion["verdict"] == "CONCLUSION"
    assert (tmp_path / "certificates.csv").exists()
    assert (tmp_path / "limsup_trace.csv").exists()


def test_theorem2_catenoid_no_conclusion(tmp_path):
    cfg = build_config("check-theorem2", {"t_max": 30.0, "out": str(tmp_path)})
    report = run(cfg)
    assert report.stages["hypotheses"]["overall"] == "INCONCLUSIVE"
    assert report.conclusion["verdict"] == "NO_CONCLUSION"
    assert report.conclusion["conclusion"] is None


def test_theorem2_synthetic_conclusion(tmp_path):
    cfg = build_config(
        "check-theorem2",
        {"v_j": {"kind": "exp", "rate": 2.0}, "exact_A": {"kind": "constant", "value": 2.0},
         "m": 2, "j": 0, "t_max": 30.0, "out": str(tmp_path)},
    )
    report = run(cfg)
    assert report.stages["hypotheses"]["overall"] == "SATISFIED"
    assert report.conclusion["verdict"] == "CONCLUSION"
    assert "envelope" in report.conclusion["conclusion"]


def test_probe_gauss_cylinder(tmp_path):
    cfg = build_config(
        "probe-gauss",
        {"surface": {"name": "cylinder"}, "direction": [1.0, 0.0, 0.0], "out": str(tmp_path)},
    )
    report = run(cfg)
    stage = report.stages["equator_crossings"]
    assert stage["fraction_with_crossing"] == 1.0
    assert stage["divergent_sequence_exists"]
    assert (tmp_path / "crossings.csv").exists()


def test_probe_envelope_catenoid(tmp_path):
    cfg = build_config(
        "probe-envelope",
        {"surface": {"name": "catenoid"}, "point": [0.0, 0.0, 0.0],
         "window": [0.5, 3.0], "out": str(tmp_path)},
    )
    report = run(cfg)
    stage = report.stages["tangent_envelope"]
    assert stage["covered"]
    assert stage["witness_s"] == pytest.approx(1.50888, abs=1e-4)


def test_no_figures_flag(tmp_path):
    cfg = build_config("oscillate", {"t_max": 10.0, "out": str(tmp_path), "figures": False})
    run(cfg)
    assert not list(tmp_path.glob("*.png"))
    assert (tmp_path / "solution.csv").exists()


# ---------------------------------------------------------------------------
# determinism and round trips
# ---------------------------------------------------------------------------

def scrub(report_dict):
    report_dict["config"]["out_dir"] = ""
    report_dict.pop("outputs", None)
    for stage in report_dict["stages"].values():
        if isinstance(stage, dict):
            stage.pop("seconds", None)
    return report_dict


def test_reports_deterministic_for_fixed_seed(tmp_path):
    runs = []
    for sub in ("a", "b"):
        out = tmp_path / sub
        cfg = build_config("verify-algebra", {"seed": 7, "samples": 80, "out": str(out),
                                              "figures": False})
        run(cfg)
        runs.append(json.dumps(scrub(read_report(out)), sort_keys=True))
    assert runs[0] == runs[1]


def test_load_profiles_csv_roundtrip(tmp_path):
    t = np.linspace(0.05, 10.0, 200)
    v_path = tmp_path / "v.csv"
    v_path.write_text("t,v\n" + "\n".join(f"{format(x, '.17g')},{format(x * x, '.17g')}" for x in t))
    loaded = load_profiles(v_path=v_path)
    np.testing.assert_array_equal(loaded["v"](t), t * t)
    assert loaded["v"].vanishes_at_zero  # inferred from the leading samples


def test_oscillate_with_csv_profile(tmp_path):
    t = np.linspace(0.002, 12.0, 6000)
    v_path = tmp_path / "v.csv"
    v_path.write_text("t,v\n" + "\n".join(f"{format(x, '.17g')},{format(x * x, '.17g')}" for x in t))
    cfg = build_config(
        "oscillate",
        {"v": {"kind": "csv", "path": str(v_path)}, "A": {"kind": "constant", "value": 1.0},
         "t_max": 12.0, "out": str(tmp_path / "out"), "figures": False},
    )
    report = run(cfg)
    zeros = report.stages["solve"]["zeros"]
    np.testing.assert_allclose(zeros[:3], [np.pi, 2 * np.pi, 3 * np.pi], atol=1e-5)


def test_verify_algebra_fixed_dimension(tmp_path):
    cfg = build_config("verify-algebra", {"seed": 42, "m": 5, "samples": 200,
                                          "out": str(tmp_path), "figures": False})
    report = run(cfg)
    assert report.stages["trace_identities"]["max_relative_residual"] <= 1e-10


def test_cli_main_exit_codes(tmp_path, capsys):
    assert main(["verify-algebra"]) == 2  # missing mandatory seed
    out = capsys.readouterr().out
    assert "seed" in out
    code = main(["oscillate", "--out", str(tmp_path), "--tmax", "10", "--no-figures"])
    assert code == 0
    assert (tmp_path / "report.json").exists()


def test_cli_main_config_file(tmp_path):
    cfg_path = tmp_path / "cfg.json"
    cfg_path.write_text(json.dumps({"seed": 3, "samples": 60, "figures": False}))
    code = main(["verify-algebra", "--config", str(cfg_path), "--out", str(tmp_path / "out")])
    assert code == 0
    assert (tmp_path / "out" / "report.json").exists()
