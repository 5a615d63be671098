"""Exception hierarchy shared by every stage.

Each error carries the CLI exit code it maps to, so the pipeline can record a failure
and the command line can exit with the documented status.
"""

from typing import Any, Optional


class OcticError(Exception):
    """Base class for all domain errors."""

    exit_code = 1

    def __init__(self, message: str, **details: Any):
        super().__init__(message)
        self.details = details

    def to_dict(self) -> dict:
        return {
            "error": type(self).__name__,
            "message": str(self),
            "details": {key: str(value) for key, value in sorted(self.details.items())},
        }


class ConfigError(OcticError):
    pass


class PoleAtPoint(OcticError):
    """A denominator of the connection vanishes at the evaluation point."""

    def __init__(self, point, factor: str, value: float):
        super().__init__(f"Connection has a pole at {point} (|{factor}| = {value:.3e})",
                         point=point, factor=factor, value=value)
        self.point = point
        self.factor = factor


class PoleOnPath(OcticError):
    def __init__(self, segment_index: int, parameter: float, factor: str):
        super().__init__(
            f"Path passes within tolerance of a discriminant zero ({factor}) "
            f"on segment {segment_index} at t={parameter:.6f}",
            segment_index=segment_index, parameter=parameter, factor=factor,
        )
        self.segment_index = segment_index
        self.parameter = parameter


class ConvergenceFailure(OcticError):
    exit_code = 4


class Underdetermined(OcticError):
    """Integer rounding needed to pin the mirror-map matrix is ambiguous."""

    def __init__(self, entry: str, value: complex, reason: str):
        super().__init__(f"Cannot determine {entry} (value {value}): {reason}",
                         entry=entry, value=value)
        self.entry = entry


class SnapFailure(OcticError):
    exit_code = 2

    def __init__(self, label: str, distance: Optional[float], reason: str):
        super().__init__(f"Snapping {label} failed: {reason}", label=label, distance=distance)
        self.label = label
        self.distance = distance


class NotUnipotent(OcticError):
    pass


class NotQuasiUnipotent(OcticError):
    pass


class Ambiguous(OcticError):
    pass


class NonCommuting(OcticError):
    def __init__(self, left: str, right: str):
        super().__init__(f"Generators {left} and {right} do not commute", left=left, right=right)


class InconclusiveCase(OcticError):
    exit_code = 3

    def __init__(self, case_id: str, reason: str):
        super().__init__(f"Case {case_id} is inconclusive: {reason}", case_id=case_id)
        self.case_id = case_id


class SchemaMismatch(OcticError):
    def __init__(self, expected: str, found: Any):
        super().__init__(f"Report schema {found!r} does not match {expected!r}",
                         expected=expected, found=found)
