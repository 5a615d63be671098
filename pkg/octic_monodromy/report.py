"""
Schema-versioned JSON reports, golden comparison and the optional HDF5 archive.

Matrices are stored as tagged nodes so rational data survives a round trip exactly:
    {"kind": "rational_matrix", "data": [["p/q", ...], ...]}
    {"kind": "complex_matrix", "data": [[["re", "im"], ...], ...]}
    {"kind": "expr_matrix", "data": [["sympy expression", ...], ...]}
"""

import json
import logging
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Any, Dict, List, Optional, Tuple, Union

import mpmath
import numpy as np
import sympy

from .errors import SchemaMismatch

logger = logging.getLogger(__name__)

REPORT_SCHEMA_VERSION = "1.0"
MATRIX_KINDS = ("rational_matrix", "complex_matrix", "expr_matrix")
NUMERIC_TOLERANCE = 1e-6


def _rational_text(value) -> str:
    q = sympy.Rational(value)
    return str(q.p) if q.q == 1 else f"{q.p}/{q.q}"


def _float_text(value) -> str:
    # mpmath numbers print at their working precision; floats print shortest round-trip form
    # in their own width
    if isinstance(value, np.floating):
        return np.format_float_scientific(value, unique=True, trim="-")
    if isinstance(value, float):
        return repr(value)
    return str(value)


def _complex_pair(value) -> List[str]:
    if hasattr(value, "imag") and hasattr(value, "real"):
        return [_float_text(value.real), _float_text(value.imag)]
    return [_float_text(value), "0.0"]


def encode_matrix(matrix) -> dict:
    if isinstance(matrix, np.ndarray):
        if np.issubdtype(matrix.dtype, np.integer):
            return {"kind": "rational_matrix", "data": [[str(int(v)) for v in row] for row in matrix]}
        rows = [list(row) for row in matrix] if matrix.dtype == np.clongdouble else matrix.tolist()
        return {"kind": "complex_matrix", "data": [[_complex_pair(v) for v in row] for row in rows]}
    matrix = sympy.Matrix(matrix)
    rows = matrix.tolist()
    if all(entry.is_Rational for entry in matrix):
        return {"kind": "rational_matrix", "data": [[_rational_text(v) for v in row] for row in rows]}
    return {"kind": "expr_matrix", "data": [[sympy.sstr(v) for v in row] for row in rows]}


def decode_matrix(node: dict):
    kind = node["kind"]
    if kind == "rational_matrix":
        return sympy.ImmutableMatrix([[sympy.Rational(v) for v in row] for row in node["data"]])
    if kind == "complex_matrix":
        return np.array([[complex(float(re), float(im)) for re, im in row] for row in node["data"]],
                        dtype=complex)
    if kind == "expr_matrix":
        return sympy.ImmutableMatrix([[sympy.sympify(v) for v in row] for row in node["data"]])
    raise SchemaMismatch(f"one of {MATRIX_KINDS}", kind)


def encode_value(value: Any) -> Any:
    """Recursively convert stage results into JSON-ready data."""
    if hasattr(value, "to_dict"):
        return encode_value(value.to_dict())
    if isinstance(value, (sympy.MatrixBase, np.ndarray)):
        if isinstance(value, np.ndarray) and value.ndim != 2:
            return [encode_value(item) for item in value]
        return encode_matrix(value)
    if isinstance(value, dict):
        return {str(key): encode_value(item) for key, item in value.items()}
    if isinstance(value, (list, tuple)):
        return [encode_value(item) for item in value]
    if isinstance(value, (bool, str)) or value is None:
        return value
    if isinstance(value, np.clongdouble):
        return {"kind": "complex", "data": _complex_pair(value)}
    if isinstance(value, np.generic):
        return encode_value(value.item())
    if isinstance(value, int):
        return value
    if isinstance(value, (Fraction, sympy.Rational)):
        return _rational_text(value)
    if isinstance(value, complex):
        return {"kind": "complex", "data": _complex_pair(value)}
    if isinstance(value, float):
        return value
    if isinstance(value, mpmath.mpc):
        return {"kind": "complex", "data": _complex_pair(value)}
    if isinstance(value, mpmath.mpf):
        return _float_text(value)
    if isinstance(value, sympy.Basic):
        return sympy.sstr(value)
    return str(value)


def decode_value(value: Any) -> Any:
    if isinstance(value, dict):
        if value.get("kind") in MATRIX_KINDS:
            return decode_matrix(value)
        if value.get("kind") == "complex":
            re, im = value["data"]
            return complex(float(re), float(im))
        return {key: decode_value(item) for key, item in value.items()}
    if isinstance(value, list):
        return [decode_value(item) for item in value]
    return value


@dataclass
class Report:
    """Per-stage results of a run, plus failure markers and provenance labels."""

    stages: Dict[str, Any] = field(default_factory=dict)
    failures: List[dict] = field(default_factory=list)
    provenance: Dict[str, str] = field(default_factory=dict)
    config: Dict[str, Any] = field(default_factory=dict)
    schema_version: str = REPORT_SCHEMA_VERSION

    def add_stage(self, name: str, result: Any, source: str = "computed"):
        self.stages[name] = result
        self.provenance[name] = source

    def add_failure(self, stage: str, error: Exception):
        entry = {"stage": stage, "error": type(error).__name__, "message": str(error)}
        details = getattr(error, "details", None)
        if details:
            entry["details"] = encode_value(details)
        self.failures.append(entry)

    def merge(self, other: "Report") -> "Report":
        merged = Report(dict(self.stages), list(self.failures), dict(self.provenance),
                        dict(self.config), self.schema_version)
        merged.stages.update(other.stages)
        merged.provenance.update(other.provenance)
        merged.failures.extend(f for f in other.failures if f not in merged.failures)
        return merged

    @property
    def ok(self) -> bool:
        return not self.failures

    def to_dict(self) -> dict:
        return {
            "schema_version": self.schema_version,
            "config": encode_value(self.config),
            "provenance": dict(self.provenance),
            "stages": encode_value(self.stages),
            "failures": encode_value(self.failures),
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True) + "\n"

    @classmethod
    def from_dict(cls, data: dict) -> "Report":
        version = data.get("schema_version") if isinstance(data, dict) else None
        if version != REPORT_SCHEMA_VERSION:
            raise SchemaMismatch(REPORT_SCHEMA_VERSION, version)
        return cls(
            stages=decode_value(data.get("stages", {})),
            failures=list(data.get("failures", [])),
            provenance=dict(data.get("provenance", {})),
            config=decode_value(data.get("config", {})),
            schema_version=version,
        )


def _write_json_atomic(path: Path, data: dict):
    """Write JSON atomically so a crash never leaves a partial report."""
    tmp_path = path.with_suffix(path.suffix + ".tmp")
    with tmp_path.open("w", encoding="utf-8") as handle:
        json.dump(data, handle, indent=2, sort_keys=True)
        handle.write("\n")
    tmp_path.replace(path)


def _existing_schema(path: Path) -> Optional[str]:
    try:
        with path.open("r", encoding="utf-8") as handle:
            existing = json.load(handle)
    except Exception as exc:
        logger.warning(f"Existing report could not be read: {path.resolve()} ({exc})")
        return None
    return existing.get("schema_version") if isinstance(existing, dict) else None


def write_report(report: Report, path: Union[str, Path]) -> Tuple[Path, str]:
    """
    Save a report as JSON.

    Returns:
        Tuple of written path and action: created, overwritten, or versioned. A file with a
        different schema version is never overwritten; the report goes to a versioned sibling.
    """
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    data = report.to_dict()
    if not path.exists():
        _write_json_atomic(path, data)
        logger.info(f"Saved report: {path.resolve()}")
        return path, "created"

    if _existing_schema(path) == REPORT_SCHEMA_VERSION:
        _write_json_atomic(path, data)
        logger.info(f"Overwrote report: {path.resolve()}")
        return path, "overwritten"

    versioned_path = path.with_name(f"{path.stem}.schema-{REPORT_SCHEMA_VERSION}{path.suffix}")
    _write_json_atomic(versioned_path, data)
    logger.warning(
        "Existing report schema is incompatible or unknown; wrote versioned report "
        f"file instead: {versioned_path.resolve()}"
    )
    return versioned_path, "versioned"


def load_report(path: Union[str, Path]) -> Report:
    with Path(path).open("r", encoding="utf-8") as handle:
        return Report.from_dict(json.load(handle))


def _walk_matrices(node: Any, prefix: str = ""):
    if isinstance(node, dict):
        if node.get("kind") in MATRIX_KINDS:
            yield prefix, node
            return
        for key, item in node.items():
            yield from _walk_matrices(item, f"{prefix}/{key}" if prefix else key)
    elif isinstance(node, list):
        for index, item in enumerate(node):
            yield from _walk_matrices(item, f"{prefix}/{index}")


def archive_hdf5(report: Report, path: Union[str, Path]) -> Path:
    """Store every matrix of the report in an HDF5 file, one group per stage."""
    import h5py

    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    encoded = report.to_dict()
    count = 0
    with h5py.File(path, "w") as handle:
        handle.attrs["schema_version"] = REPORT_SCHEMA_VERSION
        for stage, result in encoded["stages"].items():
            group = handle.create_group(stage)
            group.attrs["provenance"] = encoded["provenance"].get(stage, "")
            for name, node in _walk_matrices(result):
                dataset_name = name or "matrix"
                if node["kind"] == "complex_matrix":
                    data = decode_matrix(node)
                else:
                    data = np.array(node["data"], dtype=h5py.string_dtype())
                dataset = group.create_dataset(dataset_name, data=data)
                dataset.attrs["kind"] = node["kind"]
                count += 1
    logger.info(f"Archived {count} matrices to {path.resolve()}")
    return path


@dataclass
class GoldenDiff:
    """Differences between a report and a golden report, keyed by JSON path."""

    integral: List[dict] = field(default_factory=list)
    numeric: List[dict] = field(default_factory=list)
    missing: List[str] = field(default_factory=list)

    @property
    def clean(self) -> bool:
        return not (self.integral or self.numeric or self.missing)

    def stages(self) -> List[str]:
        """Stage names touched by a difference."""
        paths = [d["path"] for d in self.integral + self.numeric] + self.missing
        return sorted({p.split("/")[1] for p in paths if p.startswith("stages/")})

    def to_dict(self) -> dict:
        return {"integral": self.integral, "numeric": self.numeric, "missing": self.missing,
                "clean": self.clean}


def _compare_matrix(diff: GoldenDiff, path: str, left: dict, right: dict, tolerance: float):
    if left["kind"] != right["kind"]:
        diff.integral.append({"path": path, "detail": f"kind {left['kind']} != {right['kind']}"})
        return
    if left["kind"] == "complex_matrix":
        a, b = decode_matrix(left), decode_matrix(right)
        if a.shape != b.shape:
            diff.numeric.append({"path": path, "detail": f"shape {a.shape} != {b.shape}"})
            return
        error = float(np.max(np.abs(a - b))) if a.size else 0.0
        if error > tolerance:
            diff.numeric.append({"path": path, "max_abs": error})
        return
    entries = [
        {"row": r, "col": c, "found": x, "expected": y}
        for r, (row_a, row_b) in enumerate(zip(left["data"], right["data"]))
        for c, (x, y) in enumerate(zip(row_a, row_b))
        if x != y
    ]
    if len(left["data"]) != len(right["data"]):
        entries.append({"detail": "row count differs"})
    if entries:
        diff.integral.append({"path": path, "entries": entries})


def _compare(diff: GoldenDiff, path: str, left: Any, right: Any, tolerance: float):
    if isinstance(left, dict) and isinstance(right, dict):
        if left.get("kind") in MATRIX_KINDS or right.get("kind") in MATRIX_KINDS:
            _compare_matrix(diff, path, left, right, tolerance)
            return
        for key in sorted(set(left) | set(right)):
            child = f"{path}/{key}" if path else key
            if key not in left or key not in right:
                diff.missing.append(child)
            else:
                _compare(diff, child, left[key], right[key], tolerance)
        return
    if isinstance(left, list) and isinstance(right, list):
        if len(left) != len(right):
            diff.integral.append({"path": path, "detail": f"length {len(left)} != {len(right)}"})
            return
        for index, (a, b) in enumerate(zip(left, right)):
            _compare(diff, f"{path}/{index}", a, b, tolerance)
        return
    if isinstance(left, float) or isinstance(right, float):
        if not isinstance(left, (int, float)) or not isinstance(right, (int, float)) \
                or abs(left - right) > tolerance * max(1.0, abs(right)):
            diff.numeric.append({"path": path, "found": left, "expected": right})
        return
    if left != right:
        diff.integral.append({"path": path, "found": left, "expected": right})


def compare_golden(report: Union[Report, dict], golden: Union[Report, dict, str, Path],
                   tolerance: float = NUMERIC_TOLERANCE,
                   ignore: Tuple[str, ...] = ("config",)) -> GoldenDiff:
    """
    Compare a report with a golden one: integral data must match exactly, numeric data
    within tolerance in the max norm. Top-level sections listed in ignore are skipped.
    """
    if isinstance(golden, (str, Path)):
        with Path(golden).open("r", encoding="utf-8") as handle:
            golden = json.load(handle)
    left = report.to_dict() if isinstance(report, Report) else report
    right = golden.to_dict() if isinstance(golden, Report) else golden
    found = right.get("schema_version") if isinstance(right, dict) else None
    if left.get("schema_version") != found:
        raise SchemaMismatch(str(left.get("schema_version")), found)
    diff = GoldenDiff()
    for section in sorted(set(left) | set(right)):
        if section in ignore or section == "schema_version":
            continue
        if section not in left or section not in right:
            diff.missing.append(section)
            continue
        _compare(diff, section, left[section], right[section], tolerance)
    logger.info(f"Golden comparison: {len(diff.integral)} integral, {len(diff.numeric)} numeric, "
                f"{len(diff.missing)} missing difference(s)")
    return diff
