"""
Piecewise loops in the moduli charts and the library of named loops.

A segment is either a straight line between two chart points or an arc
    p(theta) = center + offset * exp(i theta)   (rotating coordinates)
    p(theta) = center + offset                  (fixed coordinates)
for theta in [0, sweep]. Rotating one coordinate gives a small circle around a coordinate
line; rotating both gives a Hopf loop around a point, which is how loops around exceptional
divisors are pushed forward from the blow-up.
"""

import cmath
import logging
import math
from dataclasses import dataclass, field
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

import numpy as np

from .errors import ConfigError
from .gaussmanin import get_chart

logger = logging.getLogger(__name__)

Point = Tuple[complex, complex]

BASE_POINT: Point = (1e-4 + 0j, 1e-4 + 0j)
CLOSURE_TOLERANCE = 1e-9
SEGMENT_KINDS = ("line", "arc")


def _point(values: Sequence) -> Point:
    return complex(values[0]), complex(values[1])


@dataclass(frozen=True)
class PathSegment:
    kind: str
    chart: str
    start: Point = (0j, 0j)
    end: Point = (0j, 0j)
    center: Point = (0j, 0j)
    offset: Point = (0j, 0j)
    sweep: float = 0.0
    rotate: Tuple[bool, bool] = (True, True)

    def __post_init__(self):
        if self.kind not in SEGMENT_KINDS:
            raise ValueError(f"Unknown segment kind {self.kind!r}")
        get_chart(self.chart)
        if self.kind == "arc" and not (-2 * math.pi - 1e-12 <= self.sweep <= 2 * math.pi + 1e-12):
            raise ValueError(f"Arc sweep {self.sweep} outside [-2pi, 2pi]")
        object.__setattr__(self, "start", _point(self.start))
        object.__setattr__(self, "end", _point(self.end))
        object.__setattr__(self, "center", _point(self.center))
        object.__setattr__(self, "offset", _point(self.offset))

    @classmethod
    def line(cls, chart: str, start: Sequence, end: Sequence) -> "PathSegment":
        return cls("line", chart, start=_point(start), end=_point(end))

    @classmethod
    def arc(cls, chart: str, center: Sequence, offset: Sequence, sweep: float = 2 * math.pi,
            rotate: Tuple[bool, bool] = (True, True)) -> "PathSegment":
        return cls("arc", chart, center=_point(center), offset=_point(offset), sweep=sweep,
                   rotate=tuple(rotate))

    @classmethod
    def circle_u(cls, chart: str, center: Sequence, offset: Sequence,
                 sweep: float = 2 * math.pi) -> "PathSegment":
        """Circle in the first coordinate; the second stays at center + offset."""
        return cls.arc(chart, center, offset, sweep, rotate=(True, False))

    @classmethod
    def circle_v(cls, chart: str, center: Sequence, offset: Sequence,
                 sweep: float = 2 * math.pi) -> "PathSegment":
        return cls.arc(chart, center, offset, sweep, rotate=(False, True))

    def _arc_point(self, theta: float) -> Point:
        phase = cmath.exp(1j * theta)
        return tuple(
            c + o * (phase if r else 1)
            for c, o, r in zip(self.center, self.offset, self.rotate)
        )

    @property
    def start_point(self) -> Point:
        return self.start if self.kind == "line" else self._arc_point(0.0)

    @property
    def end_point(self) -> Point:
        return self.end if self.kind == "line" else self._arc_point(self.sweep)

    def is_degenerate(self) -> bool:
        if self.kind == "line":
            return all(abs(a - b) == 0 for a, b in zip(self.start, self.end))
        return self.sweep == 0 or not any(
            o != 0 for o, r in zip(self.offset, self.rotate) if r
        )

    def sample(self, ts: np.ndarray) -> Tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
        """
        Points and derivatives at parameters ts in [0, 1].

        Returns (u, v, du/dt, dv/dt) as complex arrays.
        """
        ts = np.asarray(ts, dtype=float)
        if self.kind == "line":
            (u0, v0), (u1, v1) = self.start, self.end
            du, dv = u1 - u0, v1 - v0
            return (u0 + ts * du, v0 + ts * dv,
                    np.full(ts.shape, du, dtype=complex), np.full(ts.shape, dv, dtype=complex))
        phase = np.exp(1j * self.sweep * ts)
        coords, derivs = [], []
        for c, o, r in zip(self.center, self.offset, self.rotate):
            if r:
                coords.append(c + o * phase)
                derivs.append(1j * self.sweep * o * phase)
            else:
                coords.append(np.full(ts.shape, c + o, dtype=complex))
                derivs.append(np.zeros(ts.shape, dtype=complex))
        return coords[0], coords[1], derivs[0], derivs[1]

    def reversed(self) -> "PathSegment":
        if self.kind == "line":
            return PathSegment.line(self.chart, self.end, self.start)
        phase = cmath.exp(1j * self.sweep)
        offset = tuple(o * phase if r else o for o, r in zip(self.offset, self.rotate))
        return PathSegment.arc(self.chart, self.center, offset, -self.sweep, self.rotate)

    def z_start(self) -> Point:
        return get_chart(self.chart).z_point(self.start_point)

    def z_end(self) -> Point:
        return get_chart(self.chart).z_point(self.end_point)

    def to_dict(self) -> dict:
        def pair(p):
            return [[p[0].real, p[0].imag], [p[1].real, p[1].imag]]
        if self.kind == "line":
            return {"kind": "line", "chart": self.chart,
                    "start": pair(self.start), "end": pair(self.end)}
        return {"kind": "arc", "chart": self.chart, "center": pair(self.center),
                "offset": pair(self.offset), "sweep": self.sweep, "rotate": list(self.rotate)}

    @classmethod
    def from_dict(cls, data: dict) -> "PathSegment":
        def pair(values):
            if len(values) != 2:
                raise ConfigError(f"Expected a point with two coordinates, got {values!r}")
            return tuple(complex(*c) if isinstance(c, (list, tuple)) else complex(c)
                         for c in values)
        kind = data.get("kind")
        chart = data.get("chart", "z")
        try:
            if kind == "line":
                return cls.line(chart, pair(data["start"]), pair(data["end"]))
            if kind == "arc":
                return cls.arc(chart, pair(data["center"]), pair(data["offset"]),
                               float(data.get("sweep", 2 * math.pi)),
                               tuple(bool(r) for r in data.get("rotate", (True, True))))
        except (KeyError, ValueError) as e:
            raise ConfigError(f"Invalid segment {data!r}: {e}") from e
        raise ConfigError(f"Unknown segment kind {kind!r}")


def reverse_path(segments: Iterable[PathSegment]) -> List[PathSegment]:
    return [s.reversed() for s in reversed(list(segments))]


def conjugated(path: Sequence[PathSegment], loop: Sequence[PathSegment]) -> List[PathSegment]:
    """beta . loop . beta^-1 as one segment list."""
    return [*path, *loop, *reverse_path(path)]


def _close(a: Point, b: Point) -> bool:
    return all(abs(x - y) <= CLOSURE_TOLERANCE * max(1.0, abs(x), abs(y)) for x, y in zip(a, b))


@dataclass(frozen=True)
class LoopSpec:
    """
    A closed path based at a z-chart point.

    reference names the printed integral matrix the snapped monodromy is compared with,
    after raising it to reference_power.
    """

    label: str
    segments: Tuple[PathSegment, ...]
    description: str = ""
    divisor: Optional[str] = None
    reference: Optional[str] = None
    reference_power: int = 1
    reconstructed: bool = False
    base: Point = field(default=BASE_POINT)

    def __post_init__(self):
        object.__setattr__(self, "segments", tuple(self.segments))
        if not self.segments:
            raise ValueError(f"Loop {self.label} has no segments")
        self.check_closed()

    def check_closed(self):
        """Consecutive segments must join and the path must return to its base, in z."""
        first = self.segments[0].z_start()
        if not _close(first, self.base):
            raise ValueError(f"Loop {self.label} starts at {first}, not at its base {self.base}")
        previous = first
        for index, segment in enumerate(self.segments):
            start = segment.z_start()
            if not _close(previous, start):
                raise ValueError(
                    f"Loop {self.label}: segment {index} starts at {start}, "
                    f"previous ended at {previous}"
                )
            previous = segment.z_end()
        if not _close(previous, self.base):
            raise ValueError(f"Loop {self.label} ends at {previous}, not at its base {self.base}")

    def inverse(self) -> "LoopSpec":
        return LoopSpec(f"{self.label}^-1", tuple(reverse_path(self.segments)),
                        description=f"inverse of {self.label}", divisor=self.divisor,
                        reconstructed=self.reconstructed, base=self.base)

    def to_dict(self) -> dict:
        return {
            "label": self.label,
            "description": self.description,
            "divisor": self.divisor,
            "reference": self.reference,
            "reference_power": self.reference_power,
            "reconstructed": self.reconstructed,
            "segments": [s.to_dict() for s in self.segments],
        }

    @classmethod
    def from_dict(cls, label: str, data: dict) -> "LoopSpec":
        segments = data.get("segments")
        if not segments:
            raise ConfigError(f"Custom loop {label!r} needs a non-empty 'segments' list")
        base = data.get("base")
        try:
            return cls(
                label,
                tuple(PathSegment.from_dict(s) for s in segments),
                description=str(data.get("description", "custom loop")),
                divisor=data.get("divisor"),
                reference=data.get("reference"),
                reference_power=int(data.get("reference_power", 1)),
                reconstructed=bool(data.get("reconstructed", False)),
                base=_point([complex(*c) for c in base]) if base else BASE_POINT,
            )
        except ValueError as e:
            raise ConfigError(str(e)) from e


# z chart ---------------------------------------------------------------------------------

R0 = 1e-4
_B1 = (R0, 1 - R0)
_B2P = (95 / 110, 1 / 100)
_CON1_CENTER = (10 / 11, 1 / 100)      # alpha = 0 at z2 = 1/100 nearest to b2'
_B3 = (0.98, R0)
_B3P = (1 - R0, R0)


def _z_loops() -> List[LoopSpec]:
    l1 = [PathSegment.circle_u("z", (0, R0), (R0, 0))]
    l2 = [PathSegment.circle_v("z", (R0, 0), (0, R0))]

    to_b1 = [PathSegment.line("z", BASE_POINT, _B1)]
    l3 = [PathSegment.circle_v("z", (R0, 1), (0, -R0))]

    to_con1 = [
        PathSegment.line("z", BASE_POINT, _B2P),
        PathSegment.line("z", _B2P, (_CON1_CENTER[0] - R0, _CON1_CENTER[1])),
    ]
    l4p = [PathSegment.circle_u("z", _CON1_CENTER, (-R0, 0))]

    # the straight line from b3 to b3' meets alpha = 0 near z1 = 1/1.01; pass below it
    half_width = (_B3P[0] - _B3[0]) / 2
    to_b3p = [
        PathSegment.line("z", BASE_POINT, _B3),
        PathSegment.circle_u("z", (_B3[0] + half_width, R0), (-half_width, 0), math.pi),
    ]
    l5 = [PathSegment.arc("z", (1, 0), (-R0, R0))]

    return [
        LoopSpec("l1", tuple(l1), "circle around z1 = 0", "D(1,0)", "T_m1"),
        LoopSpec("l2", tuple(l2), "circle around z2 = 0", "C_inf", "T_m2"),
        LoopSpec("C1", tuple(conjugated(to_b1, l3)), "around z2 = 1 from b1", "C1",
                 "T_C1^2", reference_power=2),
        LoopSpec("con1", tuple(conjugated(to_con1, l4p)), "around the conifold from b2'",
                 "C_con", "T_con1"),
        LoopSpec("E1", tuple(conjugated(to_b3p, l5)), "Hopf loop around (1, 0)", "E1"),
        LoopSpec("E2", tuple(conjugated(to_b3p, [*l5, *l5])),
                 "Hopf loop around (1, 0) traversed twice", "E2", "T_E2^2", reference_power=2),
    ]


# zp chart --------------------------------------------------------------------------------

_C0 = (-1, -1)
_C1 = (-R0, -R0)
_C2 = (-R0, R0)
_C3 = (-R0, 1 - R0)
_CON2_V = (1 + R0) ** 2             # alpha = 0 at u = -1e-4


def _zp_loops() -> List[LoopSpec]:
    from_c0 = [
        PathSegment.line("z", _C0, (-R0, -R0)),
        PathSegment.arc("z", (0, 0), (-R0, -R0), math.pi),
    ]
    to_c1 = [*reverse_path(from_c0), PathSegment.line("zp", _C0, _C1)]
    to_c3 = [
        *to_c1,
        PathSegment.circle_v("zp", (-R0, 0), (0, -R0), math.pi),
        PathSegment.line("zp", _C2, _C3),
    ]

    l2p = [PathSegment.circle_v("zp", (-R0, 0), (0, -R0))]
    l6 = [PathSegment.circle_u("zp", (0, -R0), (-R0, 0))]
    l8 = [PathSegment.arc("zp", (0, 0), (-R0, -R0))]
    l3pp = [PathSegment.circle_v("zp", (-R0, 1), (0, -R0))]
    l7 = [PathSegment.arc("zp", (0, 1), (-R0, -R0))]
    radius = _CON2_V - (1 + R0)
    l4pp = conjugated(
        [PathSegment.circle_v("zp", (-R0, 1), (0, -R0), math.pi)],
        [PathSegment.circle_v("zp", (-R0, _CON2_V), (0, -radius))],
    )

    reconstructed = dict(reconstructed=True)
    return [
        LoopSpec("l2p", tuple(conjugated(to_c1, l2p)), "around z2' = 0 at c1", "C_inf",
                 **reconstructed),
        LoopSpec("l6", tuple(conjugated(to_c1, l6)), "around z1' = 0 at c1", "C0", "T_C0",
                 **reconstructed),
        LoopSpec("l8", tuple(conjugated(to_c1, l8)), "Hopf loop around the zp origin",
                 "D(0,-1)", **reconstructed),
        LoopSpec("l3pp", tuple(conjugated(to_c3, l3pp)), "around z2' = 1 at c3", "C1",
                 **reconstructed),
        LoopSpec("l7", tuple(conjugated(to_c3, l7)), "Hopf loop around (0, 1) in zp", "E0",
                 "T_E0^4", reference_power=4, **reconstructed),
        LoopSpec("con2", tuple(conjugated(to_c3, l4pp)), "around the conifold near (0, 1)",
                 "C_con", "T_con2", **reconstructed),
    ]


# zpp and zppp charts ---------------------------------------------------------------------

_D0 = (-1, -0.1)
_D0P = (-R0, -1e-5)
_E0 = (-1, 0.5)
_E0P = (-R0, R0)


def _double_cover_loops() -> List[LoopSpec]:
    to_d0 = [
        PathSegment.line("z", BASE_POINT, (0.1, R0)),
        PathSegment.line("z", (0.1, R0), (0.1, 50 + 50j)),
        PathSegment.line("z", (0.1, 50 + 50j), (0.1, 100)),
        PathSegment.line("zpp", _D0, _D0P),
    ]
    d12 = [PathSegment.arc("zpp", (0, 0), _D0P, math.pi)]

    to_e0 = [
        PathSegment.circle_u("z", (0, R0), (R0, 0), math.pi),
        PathSegment.line("z", (-R0, R0), (-0.5, R0)),
        PathSegment.line("z", (-0.5, R0), (-0.5, 2 + 2j)),
        PathSegment.line("z", (-0.5, 2 + 2j), (-0.5, 4)),
        PathSegment.line("zppp", _E0, _E0P),
    ]
    d11 = [PathSegment.arc("zppp", (0, 0), _E0P, math.pi)]

    return [
        LoopSpec("D12", tuple(conjugated(to_d0, d12)), "half Hopf loop at the zpp origin",
                 "D(1,-2)", "T_D(1,-2)", reconstructed=True),
        LoopSpec("D11", tuple(conjugated(to_e0, d11)), "half Hopf loop at the zppp origin",
                 "D(1,-1)", "T_D(1,-1)", reconstructed=True),
    ]


def _build_library() -> Dict[str, LoopSpec]:
    loops = [*_z_loops(), *_zp_loops(), *_double_cover_loops()]
    return {loop.label: loop for loop in loops}


LOOP_LIBRARY: Dict[str, LoopSpec] = _build_library()

# C1 is l3 conjugated from b1, con1 is l4' from b2', E2 is l5 traversed twice
LOOP_ALIASES = {"l3": "C1", "l4'": "con1", "l5^2": "E2"}
LOOP_LIBRARY.update({alias: LOOP_LIBRARY[label] for alias, label in LOOP_ALIASES.items()})

# Loops whose snapped monodromies make up the integral list used for the cones.
SNAP_LOOPS = ("l1", "l2", "C1", "con1", "E2", "l7", "con2")


def get_loop(label: str, custom: Optional[Dict[str, LoopSpec]] = None) -> LoopSpec:
    if custom and label in custom:
        return custom[label]
    try:
        return LOOP_LIBRARY[label]
    except KeyError:
        known = sorted([*LOOP_LIBRARY, *(custom or {})])
        raise KeyError(f"Unknown loop {label!r}; known loops: {known}") from None
