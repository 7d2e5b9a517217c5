import json

import pytest

from paramlowrank import ParamLowRankValueError, builtin_family
from paramlowrank import cli
from paramlowrank.cli import RunConfig, main, parse_args
from paramlowrank.grid import GridSpec
from paramlowrank.verification import SuiteResult


def _read_report(path):
    with path.open(encoding="utf-8") as fp:
        return json.load(fp)


def test_demo_diag2(tmp_path, capsys):
    assert main(["demo", "diag2", "--grid", "0:1:5", "--out", str(tmp_path)]) == 0
    lines = (tmp_path / "diag2.csv").read_text(encoding="utf-8").splitlines()
    assert lines[0] == "xi,sigma_1,sigma_2,gap_n,degenerate"
    assert lines[2] == "0.25,0.75,0.25,0.5,false"
    assert lines[3] == "0.5,0.5,0.5,0.0,true"
    increments = (tmp_path / "diag2_projector.csv").read_text().splitlines()
    assert increments[0] == "xi_left,xi_right,hs_increment"
    assert len(increments) == 5
    assert "Degenerate gaps at xi=[0.5]" in capsys.readouterr().out


def test_demo_cubic(tmp_path, capsys):
    assert main(["demo", "cubic", "--out", str(tmp_path)]) == 0
    lines = (tmp_path / "cubic.csv").read_text().splitlines()
    assert lines[0] == "xi,c_star,value"
    assert len(lines) == 102
    assert "Argmin jumps by" in capsys.readouterr().out


def test_sweep_writes_table_and_report(tmp_path):
    argv = ["sweep", "--family", "heat3", "--grid", "0:1:11", "--n", "2"]
    assert main(argv + ["--out", str(tmp_path)]) == 0
    lines = (tmp_path / "sweep.csv").read_text().splitlines()
    assert lines[0] == "xi,sigma_1,sigma_2,sigma_3,gap_n,degenerate"
    assert len(lines) == 12
    report = _read_report(tmp_path / "sweep.json")
    assert report["content"]["config"]["n"] == 2
    assert report["content"]["sweep"]["kind"] == "svd"
    assert len(report["content_sha256"]) == 64


def test_sweep_report_hash_ignores_output_options(tmp_path):
    argv = ["sweep", "--family", "diag2", "--grid", "0:1:5"]
    assert main(argv + ["--out", str(tmp_path / "a")]) == 0
    assert main(argv + ["--out", str(tmp_path / "b"), "--workers", "2"]) == 0
    first = _read_report(tmp_path / "a" / "sweep.json")
    second = _read_report(tmp_path / "b" / "sweep.json")
    assert first["content_sha256"] == second["content_sha256"]


def test_pod_of_builtin_ensemble(tmp_path):
    argv = ["pod", "--family", "atoms2", "--grid", "0:1:3", "--out", str(tmp_path)]
    assert main(argv) == 0
    lines = (tmp_path / "pod.csv").read_text().splitlines()
    assert lines[0] == "xi,lambda_1,lambda_2,gap_n,degenerate"


def test_pod_of_family_file(tmp_path):
    family_path = tmp_path / "family.json"
    items = [
        {"dim": 2, "points": [[1.0, 0.0], [0.0, 1.0]], "weights": weights}
        for weights in ([0.9, 0.1], [0.6, 0.4])
    ]
    family_path.write_text(
        json.dumps({"kind": "grid", "xi": [0.0, 1.0], "items": items})
    )
    assert main(["pod", "--input", str(family_path), "--out", str(tmp_path)]) == 0
    report = _read_report(tmp_path / "pod.json")
    assert report["content"]["sweep"]["grid"] == [0.0, 1.0]
    assert report["content"]["sweep"]["spectra"][1] == pytest.approx([0.6, 0.4])


def test_gap_reports_crossing(tmp_path, capsys):
    argv = ["gap", "--family", "diag2", "--grid", "0:1:6", "--out", str(tmp_path)]
    assert main(argv) == 0
    report = _read_report(tmp_path / "gap.json")["content"]["gap_report"]
    assert len(report["crossings"]) == 1
    assert "Suspected crossings" in capsys.readouterr().out


def test_surrogate_certifies_heat3(tmp_path, capsys):
    argv = ["surrogate", "--family", "heat3", "--grid", "0:1:51", "--eps", "0.01"]
    assert main(argv + ["--test-grid", "0:1:101", "--out", str(tmp_path)]) == 0
    content = _read_report(tmp_path / "surrogate.json")["content"]
    assert content["certificate"]["pass"] is True
    assert content["model"]["target"] == "projector"
    assert len(content["certificate"]["rows"]) == 101
    assert "Certified" in capsys.readouterr().out


def test_surrogate_with_factor_target(tmp_path):
    argv = ["surrogate", "--family", "rot2", "--grid", "0.1:1:46"]
    assert main(argv + ["--target", "factors", "--out", str(tmp_path)]) == 0
    content = _read_report(tmp_path / "surrogate.json")["content"]
    assert content["model"]["target"] == "factors"
    assert len(content["certificate"]["rows"]) == 200


def test_failed_certificate_still_succeeds(tmp_path, capsys):
    argv = ["surrogate", "--family", "heat3", "--grid", "0:1:3", "--eps", "1e-9"]
    assert main(argv + ["--out", str(tmp_path)]) == 0
    content = _read_report(tmp_path / "surrogate.json")["content"]
    assert content["certificate"]["pass"] is False
    assert "Not certified" in capsys.readouterr().out


def test_surrogate_on_crossing_fails(tmp_path, capsys):
    assert main(["surrogate", "--family", "diag2", "--out", str(tmp_path)]) == 1
    assert "error: Spectrum.Degenerate:" in capsys.readouterr().err
    assert not (tmp_path / "surrogate.json").exists()


def test_invalid_rank_exits_with_1(tmp_path, capsys):
    assert main(["sweep", "--family", "diag2", "--n", "0", "--out", str(tmp_path)]) == 1
    err = capsys.readouterr().err
    assert err.startswith("error: Input.Invalid: n must be at least 1")


def test_rank_too_large_exits_with_1(tmp_path, capsys):
    assert main(["sweep", "--family", "diag2", "--n", "3", "--out", str(tmp_path)]) == 1
    assert "n must be between 1 and 2" in capsys.readouterr().err


def test_usage_error_exits_with_1(capsys):
    assert main(["transmogrify"]) == 1
    assert capsys.readouterr().err.startswith("error: Input.Invalid:")


def test_bad_grid_exits_with_1(tmp_path, capsys):
    argv = ["sweep", "--family", "diag2", "--grid", "1:0:5", "--out", str(tmp_path)]
    assert main(argv) == 1
    assert "error: Input.Invalid:" in capsys.readouterr().err


def test_family_kind_mismatch_exits_with_1(tmp_path, capsys):
    assert main(["sweep", "--family", "atoms2", "--out", str(tmp_path)]) == 1
    assert "sweep needs a matrix-valued family" in capsys.readouterr().err


def test_missing_input_file_exits_with_1(tmp_path, capsys):
    argv = ["sweep", "--input", str(tmp_path / "missing.json"), "--out", str(tmp_path)]
    assert main(argv) == 1
    assert capsys.readouterr().err.startswith("error: Input.IO:")


def test_verify_writes_reports(tmp_path):
    assert main(["verify", "--scale", "0.05", "--out", str(tmp_path)]) == 0
    lines = (tmp_path / "verify.csv").read_text().splitlines()
    assert lines[0] == "suite,checks,failures,passed,worst"
    assert len(lines) == 11
    content = _read_report(tmp_path / "verify.json")["content"]
    assert content["passed"] is True
    assert content["scale"] == 0.05


def test_failed_verification_exits_with_2(tmp_path, capsys, monkeypatch):
    def failing_suites(seed, scale, printer):
        result = SuiteResult("pod")
        result.check(1.0, 0.0, "tail")
        return [result]

    monkeypatch.setattr(cli, "run_suites", failing_suites)
    assert main(["verify", "--out", str(tmp_path)]) == 2
    assert "error: Verify.Failed: failed suites: pod" in capsys.readouterr().err
    assert _read_report(tmp_path / "verify.json")["content"]["passed"] is False


def test_parse_args_builds_config():
    config = parse_args(
        ["surrogate", "--family", "heat3", "--grid", "0:1:11", "--eps", "0.1"]
    )
    assert config.command == "surrogate"
    assert config.epsilon == 0.1
    assert config.grid_for(builtin_family("heat3")).tolist()[1] == pytest.approx(0.1)
    assert "out" not in config.compile()


def test_config_needs_exactly_one_source():
    with pytest.raises(ParamLowRankValueError, match="exactly one of --input"):
        RunConfig(command="sweep")


def test_config_rejects_short_grid():
    with pytest.raises(ParamLowRankValueError, match="grid needs at least 2 points"):
        RunConfig(command="sweep", family="diag2", grid=GridSpec("0.5"))


def test_default_grid_uses_family_domain():
    config = RunConfig(command="sweep", family="rot2")
    grid = config.grid_for(builtin_family("rot2"))
    assert len(grid) == 101
    assert (grid[0], grid[-1]) == (0.1, 1.0)
