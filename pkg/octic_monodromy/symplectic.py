"""Integral symplectic group helpers for the form Q = [[0, I], [-I, 0]]."""

import logging
from typing import List, Tuple

import numpy as np
import sympy

from .amodel import Q_FORM

logger = logging.getLogger(__name__)

Q_NUMERIC = np.array(Q_FORM.tolist(), dtype=np.int64)


def is_symplectic(matrix, form=Q_FORM) -> bool:
    """Exact test of G^T Q G = Q."""
    g = sympy.Matrix(matrix)
    return sympy.simplify(g.T * form * g - form) == sympy.zeros(*form.shape)


def symplectic_inverse(matrix) -> sympy.Matrix:
    """G^-1 = -Q G^T Q for G in Sp(Q)."""
    g = sympy.Matrix(matrix)
    return -Q_FORM * g.T * Q_FORM


def adjoint(g, n) -> sympy.Matrix:
    """Ad(G) N = G N G^-1."""
    g = sympy.Matrix(g)
    return g * sympy.Matrix(n) * g.inv()


def in_congruence_subgroup(matrix, level: int) -> bool:
    """Integral, symplectic and congruent to the identity mod level."""
    g = sympy.Matrix(matrix)
    if any(not entry.is_integer for entry in g):
        return False
    if not is_symplectic(g):
        return False
    return all((g[r, c] - (1 if r == c else 0)) % level == 0
               for r in range(g.rows) for c in range(g.cols))


def level_generators(level: int) -> List[np.ndarray]:
    """
    Generators of the principal congruence subgroup of level n in Sp(6, Z).

    Upper and lower unipotents with blocks n S (S a symmetric elementary matrix) and
    Levi elements diag(A, A^-T) with A = I + n E_ij. Inverses are included.
    """
    eye3 = np.eye(3, dtype=np.int64)
    zero3 = np.zeros((3, 3), dtype=np.int64)
    generators = []
    symmetric = []
    for i in range(3):
        for j in range(i, 3):
            s = np.zeros((3, 3), dtype=np.int64)
            s[i, j] = s[j, i] = 1
            symmetric.append(s)
    for s in symmetric:
        for sign in (1, -1):
            generators.append(np.block([[eye3, sign * level * s], [zero3, eye3]]))
            generators.append(np.block([[eye3, zero3], [sign * level * s, eye3]]))
    for i in range(3):
        for j in range(3):
            if i == j:
                continue
            for sign in (1, -1):
                a = eye3.copy()
                a[i, j] = sign * level
                a_inv_t = eye3.copy()
                a_inv_t[j, i] = -sign * level
                generators.append(np.block([[a, zero3], [zero3, a_inv_t]]))
    return generators


def random_words(level: int, length: int, count: int,
                 rng: np.random.Generator) -> Tuple[np.ndarray, np.ndarray]:
    """count random level-n words with length letters, and their inverses, as (count, 6, 6) int64."""
    generators = np.stack(level_generators(level))
    picks = rng.integers(0, len(generators), size=(count, length))
    words = np.broadcast_to(np.eye(6, dtype=np.int64), (count, 6, 6)).copy()
    for position in range(length):
        words = words @ generators[picks[:, position]]
    inverses = -Q_NUMERIC @ words.transpose(0, 2, 1) @ Q_NUMERIC
    return words, inverses


def is_symplectic_numeric(matrix: np.ndarray) -> bool:
    return bool(np.array_equal(matrix.T @ Q_NUMERIC @ matrix, Q_NUMERIC))

