"""
Numerical parallel transport of the omega frame and monodromy extraction.

Each segment is cut into N equal parameter steps. The default rule is the iterated linear
approximation v <- v - (A_u du + A_v dv) v evaluated at the left end of each step; "rk4"
uses the classical Runge-Kutta step matrix instead. Step matrices are formed in vectorized
chunks and multiplied by a pairwise tree, which keeps the rounding growth logarithmic in N.

A working precision above the 53 bits of a double accumulates the products in the
platform's extended complex type (np.clongdouble); the connection itself is evaluated in
double precision.
"""

import logging
from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence

import numpy as np
import sympy

from .errors import ConvergenceFailure, PoleOnPath
from .frobenius import DEFAULT_YUKAWA_CONSTANT, intersection_matrix
from .gaussmanin import connection_arrays, nearest_pole
from .loops import LoopSpec, PathSegment

logger = logging.getLogger(__name__)

PATH_POLE_TOLERANCE = 1e-8
CHUNK_SIZE = 2 ** 16
METHODS = ("euler", "rk4")
DOUBLE_BITS = 53

_IDENTITY = np.eye(6, dtype=complex)


def working_dtype(precision: int = DOUBLE_BITS) -> np.dtype:
    return np.dtype(np.complex128 if precision <= DOUBLE_BITS else np.clongdouble)


def _tree_product(matrices: np.ndarray) -> np.ndarray:
    """E_{n-1} ... E_1 E_0 for a stack ordered by step index."""
    stack = matrices
    while stack.shape[0] > 1:
        if stack.shape[0] % 2:
            stack = np.concatenate([stack, np.eye(6, dtype=stack.dtype)[None]], axis=0)
        stack = stack[1::2] @ stack[0::2]
    return stack[0]


def _generator(segment: PathSegment, ts: np.ndarray) -> np.ndarray:
    """A(t) = A_u du/dt + A_v dv/dt at parameters ts, shape (n, 6, 6)."""
    us, vs, dus, dvs = segment.sample(ts)
    a_u, a_v = connection_arrays(segment.chart, us, vs)
    return a_u * dus[:, None, None] + a_v * dvs[:, None, None]


def _check_poles(segment: PathSegment, index: int, ts: np.ndarray):
    us, vs, _, _ = segment.sample(ts)
    label, distance = nearest_pole(segment.chart, us, vs)
    if not distance.size:
        return
    worst = int(np.argmin(distance))
    if distance[worst] < PATH_POLE_TOLERANCE:
        raise PoleOnPath(index, float(ts[worst]), label)


def _step_matrices(segment: PathSegment, ts: np.ndarray, steps: int, method: str,
                   dtype: np.dtype = _IDENTITY.dtype) -> np.ndarray:
    identity = np.eye(6, dtype=dtype)
    h = identity.real.dtype.type(1) / steps
    if method == "euler":
        return identity - h * _generator(segment, ts).astype(dtype)
    a0 = -_generator(segment, ts).astype(dtype)
    a_half = -_generator(segment, ts + 0.5 / steps).astype(dtype)
    a1 = -_generator(segment, ts + 1.0 / steps).astype(dtype)
    k1 = a0
    k2 = a_half @ (identity + (h / 2) * k1)
    k3 = a_half @ (identity + (h / 2) * k2)
    k4 = a1 @ (identity + h * k3)
    return identity + (h / 6) * (k1 + 2 * k2 + 2 * k3 + k4)


def transport_segment(segment: PathSegment, steps: int, method: str = "euler",
                      index: int = 0, dtype: np.dtype = _IDENTITY.dtype) -> np.ndarray:
    """Propagator P of one segment: frame(end) = P frame(start)."""
    if steps < 1:
        raise ValueError("steps must be >= 1")
    if method not in METHODS:
        raise ValueError(f"Unknown transport method {method!r}; expected one of {METHODS}")
    if segment.is_degenerate():
        return np.eye(6, dtype=dtype)
    h = 1.0 / steps
    result = np.eye(6, dtype=dtype)
    for first in range(0, steps, CHUNK_SIZE):
        count = min(CHUNK_SIZE, steps - first)
        ts = (first + np.arange(count)) * h
        _check_poles(segment, index, np.append(ts, ts[-1] + h))
        result = _tree_product(_step_matrices(segment, ts, steps, method, dtype)) @ result
    return result


def transport(path: Iterable[PathSegment], frame0: Optional[np.ndarray] = None,
              steps_per_segment: int = 10 ** 6, method: str = "euler",
              precision: int = DOUBLE_BITS) -> np.ndarray:
    """
    Transport frame0 (columns are vectors in omega coordinates) along path.

    Args:
        path: Ordered segments; charts may change between segments.
        frame0: 6x6 complex matrix, identity when omitted.
        steps_per_segment: Number of equal parameter steps on every segment.
        method: "euler" or "rk4".
        precision: Working precision in bits; see working_dtype.
    """
    dtype = working_dtype(precision)
    frame = np.eye(6, dtype=dtype) if frame0 is None else np.array(frame0, dtype=dtype)
    for index, segment in enumerate(path):
        frame = transport_segment(segment, steps_per_segment, method, index, dtype) @ frame
    return frame


@dataclass
class MonodromyEstimate:
    label: str
    matrix: np.ndarray
    steps: int
    error_bound: float
    method: str = "euler"
    reconstructed: bool = False
    raw: Optional[np.ndarray] = field(default=None, repr=False)

    def __post_init__(self):
        self.matrix = np.asarray(self.matrix)
        if not np.issubdtype(self.matrix.dtype, np.complexfloating):
            self.matrix = self.matrix.astype(complex)
        if not np.all(np.isfinite(self.matrix)):
            raise ConvergenceFailure(f"Monodromy of {self.label} is not finite",
                                     label=self.label)

    @classmethod
    def identity(cls, label: str = "id") -> "MonodromyEstimate":
        return cls(label, _IDENTITY.copy(), 0, 0.0)

    def power(self, exponent: int) -> "MonodromyEstimate":
        result = MonodromyEstimate.identity(f"{self.label}^{exponent}")
        for _ in range(exponent):
            result = compose(result, self)
        result.label = f"{self.label}^{exponent}"
        return result


def _order(method: str) -> int:
    return 1 if method == "euler" else 4


def monodromy(loop: LoopSpec, steps: int = 10 ** 6, method: str = "euler",
              max_error: Optional[float] = None, precision: int = DOUBLE_BITS) -> MonodromyEstimate:
    """
    Monodromy matrix S = P^T of a loop, P the propagator of the omega frame; with this
    convention S agrees with exp(-2 pi i Res) at the MUM point.

    The loop is transported with N and N/2 steps per segment; the reported matrix is the
    Richardson extrapolation of the two and error_bound the max-norm of their difference.
    """
    loop.check_closed()
    half = max(1, steps // 2)
    fine = transport(loop.segments, steps_per_segment=steps, method=method, precision=precision).T
    coarse = transport(loop.segments, steps_per_segment=half, method=method, precision=precision).T
    weight = 2 ** _order(method)
    extrapolated = (weight * fine - coarse) / (weight - 1)
    error = float(np.max(np.abs(fine - coarse)))
    logger.info(f"Loop {loop.label}: N={steps} ({method}), error bound {error:.3e}")
    if loop.reconstructed:
        logger.warning(f"Loop {loop.label} uses reconstructed coordinates")
    if max_error is not None and error > max_error:
        raise ConvergenceFailure(
            f"Monodromy of {loop.label} has error bound {error:.3e} > {max_error:.3e}",
            label=loop.label, error_bound=error, steps=steps,
        )
    return MonodromyEstimate(loop.label, extrapolated, steps, error, method,
                             loop.reconstructed, raw=fine)


def compose(m1: MonodromyEstimate, m2: MonodromyEstimate) -> MonodromyEstimate:
    """Monodromy of m1's loop followed by m2's loop: S = S1 S2."""
    matrix = m1.matrix @ m2.matrix
    norm1 = float(np.max(np.abs(m1.matrix)))
    norm2 = float(np.max(np.abs(m2.matrix)))
    error = 6 * (m1.error_bound * norm2 + norm1 * m2.error_bound)
    return MonodromyEstimate(f"{m1.label}*{m2.label}", matrix, max(m1.steps, m2.steps), error,
                             m1.method, m1.reconstructed or m2.reconstructed)


_FORM_CACHE = {}


def intersection_form_at(point: Sequence[complex], c=DEFAULT_YUKAWA_CONSTANT) -> np.ndarray:
    """Numeric intersection matrix I(z) at a z-chart point."""
    key = sympy.srepr(sympy.sympify(c))
    if key not in _FORM_CACHE:
        z1, z2 = sympy.symbols("z1 z2")
        _FORM_CACHE[key] = sympy.lambdify((z1, z2), intersection_matrix(c), "numpy")
    return np.asarray(_FORM_CACHE[key](complex(point[0]), complex(point[1])), dtype=complex)


def form_residual(estimate: MonodromyEstimate, base: Sequence[complex]) -> float:
    """max |S I(b) S^T - I(b)|, which vanishes for an exact monodromy."""
    form = intersection_form_at(base)
    s = estimate.matrix
    return float(np.max(np.abs(s @ form @ s.T - form)))


def determinant_residual(estimate: MonodromyEstimate) -> float:
    return float(abs(np.linalg.det(estimate.matrix.astype(complex)) - 1))

