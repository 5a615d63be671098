import json

import h5py
import numpy as np
import pytest
import sympy

from octic_monodromy.errors import ConvergenceFailure, SchemaMismatch
from octic_monodromy.report import (
    REPORT_SCHEMA_VERSION,
    Report,
    archive_hdf5,
    compare_golden,
    decode_matrix,
    encode_matrix,
    encode_value,
    load_report,
    write_report,
)


def _sample_report() -> Report:
    report = Report(config={"steps": 1000})
    report.add_stage("snap", {
        "matrix": sympy.Matrix([[1, sympy.Rational(14, 3)], [0, 1]]),
        "distance": 1.5e-7,
        "quasi_unipotent": [1, 4],
    })
    report.add_stage("transport", {
        "loops": {"l1": {"matrix": np.array([[1 + 1e-7j, 2.0], [0, 1]]), "error_bound": 1e-6}},
    }, source="computed")
    return report


def test_matrix_encoding_kinds():
    rational = encode_matrix(sympy.Matrix([[1, sympy.Rational(-1, 3)]]))
    assert rational == {"kind": "rational_matrix", "data": [["1", "-1/3"]]}
    assert encode_matrix(np.array([[2, -1]]))["kind"] == "rational_matrix"
    numeric = encode_matrix(np.array([[0.5 + 2j]]))
    assert numeric == {"kind": "complex_matrix", "data": [[["0.5", "2.0"]]]}
    assert encode_matrix(sympy.Matrix([[sympy.pi]]))["kind"] == "expr_matrix"
    assert decode_matrix(rational) == sympy.Matrix([[1, sympy.Rational(-1, 3)]])
    with pytest.raises(SchemaMismatch):
        decode_matrix({"kind": "tensor", "data": []})


def test_scalar_encoding():
    assert encode_value(np.int64(3)) == 3
    assert encode_value(np.bool_(True)) is True
    assert encode_value(sympy.Rational(7, 2)) == "7/2"
    assert encode_value(1 - 2j) == {"kind": "complex", "data": ["1.0", "-2.0"]}
    assert encode_value((1, "x")) == [1, "x"]


def test_failures_carry_details():
    report = Report()
    report.add_failure("transport", ConvergenceFailure("too coarse", label="l1"))
    assert not report.ok
    assert report.failures == [{"stage": "transport", "error": "ConvergenceFailure",
                                "message": "too coarse", "details": {"label": "l1"}}]


def test_write_report_created_then_overwritten(tmp_path):
    path = tmp_path / "reports" / "run.json"
    written, action = write_report(_sample_report(), path)
    assert (written, action) == (path, "created")
    written, action = write_report(_sample_report(), path)
    assert action == "overwritten"
    data = json.loads(path.read_text(encoding="utf-8"))
    assert data["schema_version"] == REPORT_SCHEMA_VERSION
    assert data["stages"]["snap"]["matrix"]["data"] == [["1", "14/3"], ["0", "1"]]
    assert path.read_text(encoding="utf-8").endswith("\n")
    assert not (tmp_path / "reports" / "run.json.tmp").exists()


def test_incompatible_report_is_never_overwritten(tmp_path):
    path = tmp_path / "run.json"
    path.write_text(json.dumps({"schema_version": "0.9"}), encoding="utf-8")
    written, action = write_report(_sample_report(), path)
    assert action == "versioned"
    assert written == tmp_path / "run.schema-1.0.json"
    assert json.loads(path.read_text(encoding="utf-8")) == {"schema_version": "0.9"}

    path.write_text("{not json", encoding="utf-8")
    assert write_report(_sample_report(), path)[1] == "versioned"


def test_load_report_round_trip(tmp_path):
    path, _ = write_report(_sample_report(), tmp_path / "run.json")
    loaded = load_report(path)
    assert loaded.stages["snap"]["matrix"] == sympy.Matrix([[1, sympy.Rational(14, 3)], [0, 1]])
    assert loaded.provenance == {"snap": "computed", "transport": "computed"}
    assert np.allclose(loaded.stages["transport"]["loops"]["l1"]["matrix"],
                       np.array([[1 + 1e-7j, 2.0], [0, 1]]))


def test_load_rejects_other_schema():
    with pytest.raises(SchemaMismatch):
        Report.from_dict({"schema_version": "2.0"})


def test_golden_comparison(tmp_path):
    golden_path, _ = write_report(_sample_report(), tmp_path / "golden.json")
    assert compare_golden(_sample_report(), golden_path).clean

    changed = _sample_report()
    changed.stages["snap"]["matrix"] = sympy.Matrix([[1, 5], [0, 1]])
    changed.stages["transport"]["loops"]["l1"]["error_bound"] = 1e-6 + 1e-9
    changed.config["steps"] = 2000
    diff = compare_golden(changed, golden_path)
    assert not diff.clean
    assert diff.stages() == ["snap"]
    assert diff.integral[0]["entries"] == [
        {"row": 0, "col": 1, "found": "5", "expected": "14/3"},
    ]

    drifted = _sample_report()
    drifted.stages["transport"]["loops"]["l1"]["matrix"] = np.array([[1.01, 2.0], [0, 1]])
    drifted.stages.pop("snap")
    diff = compare_golden(drifted, golden_path)
    assert diff.numeric[0]["path"] == "stages/transport/loops/l1/matrix"
    assert diff.missing == ["stages/snap"]

    with pytest.raises(SchemaMismatch):
        compare_golden(_sample_report(), {"schema_version": "0.1"})


def test_hdf5_archive(tmp_path):
    path = archive_hdf5(_sample_report(), tmp_path / "run.h5")
    with h5py.File(path, "r") as handle:
        assert handle.attrs["schema_version"] == REPORT_SCHEMA_VERSION
        assert handle["transport"].attrs["provenance"] == "computed"
        loop = handle["transport"]["loops/l1/matrix"]
        assert loop.attrs["kind"] == "complex_matrix"
        assert np.iscomplexobj(loop[()])
        snap = handle["snap"]["matrix"]
        assert snap.attrs["kind"] == "rational_matrix"
        assert snap[0, 1].decode() == "14/3"
