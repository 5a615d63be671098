"""
Normalized mirror-map matrix R and the passage from numerical to integral monodromies.

Intertwining with the MUM monodromies and the intersection form fix R up to three
complex numbers R12, R13, R16. These are pinned by asking that three entries of
R S_con1 R^-1 be integers, each entry being affine in one unknown once the previous ones
are known. T = R S R^-1 is then rounded to the nearest integer matrix.
"""

import logging
from dataclasses import dataclass, field
from typing import Callable, Dict, Optional, Tuple

import numpy as np
import sympy

from .errors import SnapFailure, Underdetermined
from .lmhs import quasi_unipotent_indices
from .symplectic import is_symplectic

logger = logging.getLogger(__name__)

SNAP_THRESHOLD = 0.1
BOUNDARY_MARGIN = 0.05


def r_template(r12: complex, r13: complex, r16: complex, c11: complex = 0) -> np.ndarray:
    """R with the three free entries substituted; det R = -1 for every choice."""
    r15 = 2 * r12 ** 2 + 1
    r14 = 4 * r12 * r13 + 1 / 3
    r26 = 2 * r13 + r14 + 2 * r15 + c11 / 2 * r12 - 14 / 3
    return np.array([
        [1, r12, r13, r14, r15, r16],
        [0, -1, 0, 4 - c11 / 2 - 4 * r13, -4 * r12 - 2, r26],
        [0, 0, -1, -4 * r12 - 2, 0, 2 * r12 + r15 - 2],
        [0, 0, 0, 0, 0, -1],
        [0, 0, 0, 1, 0, -r12],
        [0, 0, 0, -2, 1, -r13],
    ], dtype=complex)


def conjugate(r: np.ndarray, s: np.ndarray) -> np.ndarray:
    return r @ s @ np.linalg.inv(r)


def _integral_root(entry: str, value_at: Callable[[complex], complex]) -> Tuple[complex, int]:
    """
    Solve alpha x + beta = k for the integer k placing Re x in [-1/2, 1/2).

    value_at must be affine in x.
    """
    beta = value_at(0)
    alpha = value_at(1) - beta
    if abs(alpha) < 1e-12:
        raise Underdetermined(entry, beta, "entry does not depend on the unknown")
    if abs(value_at(1j) - (alpha * 1j + beta)) > 1e-6 * max(1.0, abs(beta)):
        raise Underdetermined(entry, beta, "entry is not affine in the unknown")
    centre = int(np.floor(beta.real))
    chosen = []
    for k in range(centre - 3, centre + 4):
        x = (k - beta) / alpha
        if -0.5 <= x.real < 0.5:
            chosen.append((x, k))
    if len(chosen) != 1:
        raise Underdetermined(entry, beta, f"{len(chosen)} integer roundings fit")
    x, k = chosen[0]
    if 0.5 - abs(x.real) < BOUNDARY_MARGIN:
        raise Underdetermined(entry, x, "real part is too close to the rounding boundary")
    return x, k


@dataclass
class RMatrix:
    r12: complex
    r13: complex
    r16: complex
    c11: complex
    matrix: np.ndarray = field(repr=False)
    targets: Dict[str, int] = field(default_factory=dict)
    diagnostics: Dict[str, float] = field(default_factory=dict)

    def free_entries(self) -> Dict[str, complex]:
        return {"R12": self.r12, "R13": self.r13, "R16": self.r16}


def solve_R(s_con1: np.ndarray, c11: complex = 0,
            intertwining: Optional[Dict[str, Tuple[np.ndarray, np.ndarray]]] = None) -> RMatrix:
    """
    Fix R from the conifold monodromy.

    Entries (5,1) and (6,1) of R S_con1 R^-1 pin R12 and R13; entry (1,1) then pins R16.
    intertwining maps a label to (T, S) pairs whose residual |T R - R S| is recorded.
    """
    s = np.asarray(s_con1, dtype=complex)

    def entry(row: int, r12=0j, r13=0j, r16=0j) -> complex:
        return conjugate(r_template(r12, r13, r16, c11), s)[row, 0]

    r12, k51 = _integral_root("R12", lambda x: entry(4, r12=x))
    r13, k61 = _integral_root("R13", lambda x: entry(5, r13=x))
    r16, k11 = _integral_root("R16", lambda x: entry(0, r12=r12, r13=r13, r16=x))
    matrix = r_template(r12, r13, r16, c11)
    result = RMatrix(r12, r13, r16, c11, matrix,
                     targets={"(5,1)": k51, "(6,1)": k61, "(1,1)": k11})
    result.diagnostics["det_residual"] = float(abs(np.linalg.det(matrix) + 1))
    for label, (t, s_other) in (intertwining or {}).items():
        t = np.asarray(t, dtype=complex)
        residual = float(np.max(np.abs(t @ matrix - matrix @ np.asarray(s_other, dtype=complex))))
        result.diagnostics[f"intertwining_{label}"] = residual
    logger.info(f"R12={r12:.6g}, R13={r13:.6g}, R16={r16:.6g}")
    return result


@dataclass
class IntSympMatrix:
    label: str
    matrix: sympy.ImmutableMatrix
    distance: float
    quasi_indices: Tuple[int, int]

    def rows(self):
        return self.matrix.tolist()


def snap_integral(label: str, s: np.ndarray, r: np.ndarray,
                  threshold: float = SNAP_THRESHOLD) -> IntSympMatrix:
    """Round R S R^-1 to an integral symplectic quasi-unipotent matrix."""
    t = conjugate(np.asarray(r, dtype=complex), np.asarray(s, dtype=complex))
    rounded = np.rint(t.real).astype(np.int64)
    distance = float(np.max(np.abs(t - rounded)))
    if not np.isfinite(distance) or distance > threshold:
        raise SnapFailure(label, distance, f"distance {distance:.3e} to Z^36 exceeds {threshold}")
    matrix = sympy.ImmutableMatrix(rounded.tolist())
    if not is_symplectic(matrix):
        raise SnapFailure(label, distance, "rounded matrix is not symplectic")
    indices = quasi_unipotent_indices(matrix)
    logger.info(f"Snapped {label} at distance {distance:.3e}, (m, n) = {indices}")
    return IntSympMatrix(label, matrix, distance, indices)


def basis_change(t, p) -> sympy.Matrix:
    """P T P^-1."""
    p = sympy.Matrix(p)
    return p * sympy.Matrix(t) * p.inv()
