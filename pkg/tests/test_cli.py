import json

import pytest

from octic_monodromy import __version__
from octic_monodromy.cli import build_parser, execute, exit_code_for
from octic_monodromy.report import Report


@pytest.fixture(autouse=True)
def _clean_environment(monkeypatch):
    for name in ("OCTIC_PRECISION", "OCTIC_THREADS", "OCTIC_LOG_LEVEL"):
        monkeypatch.delenv(name, raising=False)


def test_version(capsys):
    with pytest.raises(SystemExit) as info:
        build_parser().parse_args(["--version"])
    assert info.value.code == 0
    assert __version__ in capsys.readouterr().out


def test_run_writes_report(tmp_path, capsys):
    output = tmp_path / "run.json"
    assert execute(["--output", str(output), "run", "--stages", "cones"]) == 0
    assert f"Report created: {output}" in capsys.readouterr().out
    data = json.loads(output.read_text(encoding="utf-8"))
    assert data["provenance"] == {"cones": "printed"}
    assert data["config"]["stages"] == ["cones"]

    assert execute(["--output", str(output), "run", "--stages", "cones"]) == 0
    assert "Report overwritten" in capsys.readouterr().out


def test_run_to_stdout(capsys):
    assert execute(["run", "--stages", "amodel"]) == 0
    data = json.loads(capsys.readouterr().out)
    assert data["stages"]["amodel"]["pairing_is_minus_Q"] is True


def test_compare_against_itself(tmp_path, capsys):
    output = tmp_path / "run.json"
    execute(["--output", str(output), "run", "--stages", "cones"])
    capsys.readouterr()
    assert execute(["compare", "--golden", str(output), "--report", str(output)]) == 0
    assert json.loads(capsys.readouterr().out)["clean"] is True


def test_compare_reports_difference(tmp_path, capsys):
    report = tmp_path / "run.json"
    golden = tmp_path / "golden.json"
    execute(["--output", str(report), "run", "--stages", "cones"])
    data = json.loads(report.read_text(encoding="utf-8"))
    data["stages"]["cones"]["partitions"]["N1"] = [3, 3]
    golden.write_text(json.dumps(data), encoding="utf-8")
    capsys.readouterr()
    assert execute(["compare", "--golden", str(golden), "--report", str(report)]) == 1
    diff = json.loads(capsys.readouterr().out)
    assert diff["clean"] is False
    assert {entry["path"] for entry in diff["integral"]} == {
        "stages/cones/partitions/N1/0", "stages/cones/partitions/N1/1",
    }


def test_fan_check_single_case(tmp_path, capsys):
    output = tmp_path / "fan.json"
    assert execute(["--output", str(output), "fan-check", "--case", "63x63'"]) == 0
    assert "63x63'" in capsys.readouterr().out
    verdicts = json.loads(output.read_text(encoding="utf-8"))
    assert verdicts["63x63'"]["result"] == "no_nontrivial_intersection"


def test_monodromy_convergence_failure_exit_code(capsys):
    code = execute(["monodromy", "--loop", "l1", "--steps", "1000", "--max-error", "1e-30"])
    assert code == 4
    data = json.loads(capsys.readouterr().out)
    assert data["failures"][0]["error"] == "ConvergenceFailure"


@pytest.mark.parametrize("argv", [
    ["run", "--stages", "plot"],
    ["--log-level", "LOUD", "run", "--stages", "cones"],
    ["run", "--stages", "cones", "--steps", "10"],
    ["fan-check", "--case", "12x67"],
    ["--config", "does-not-exist.toml", "run"],
])
def test_errors_exit_with_one(argv):
    assert execute(argv) == 1


def test_exit_code_follows_first_failure():
    assert exit_code_for(Report()) == 0
    report = Report(failures=[{"stage": "snap", "error": "SnapFailure"},
                              {"stage": "transport", "error": "ConvergenceFailure"}])
    assert exit_code_for(report) == 2
    assert exit_code_for(Report(failures=[{"stage": "fan", "error": "InconclusiveCase"}])) == 3
    assert exit_code_for(Report(failures=[{"stage": "snap", "error": "Skipped"}])) == 1
