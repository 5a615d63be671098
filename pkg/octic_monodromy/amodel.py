"""
Even cohomology of the resolved mirror octic, Euler pairing and the Hosono basis.

Classes live on the fixed basis {1, H, L, h, l, V}: H, L in degree 2, h = HL/4 and
l = H^2/4 - HL/2 in degree 4, V = -H^3/8 in degree 6 with integral -1.
"""

import logging
from dataclasses import dataclass, fields
from fractions import Fraction
from typing import Tuple

import sympy

logger = logging.getLogger(__name__)

# Standard symplectic form used across the package.
Q_FORM = sympy.ImmutableMatrix(6, 6, lambda i, j: 1 if j == i + 3 else (-1 if i == j + 3 else 0))


@dataclass(frozen=True)
class CohClass:
    c0: Fraction = Fraction(0)
    cH: Fraction = Fraction(0)
    cL: Fraction = Fraction(0)
    ch: Fraction = Fraction(0)
    cl: Fraction = Fraction(0)
    cV: Fraction = Fraction(0)

    def __post_init__(self):
        for f in fields(self):
            object.__setattr__(self, f.name, Fraction(getattr(self, f.name)))

    def as_tuple(self) -> Tuple[Fraction, ...]:
        return (self.c0, self.cH, self.cL, self.ch, self.cl, self.cV)

    def __add__(self, other: "CohClass") -> "CohClass":
        return CohClass(*(a + b for a, b in zip(self.as_tuple(), other.as_tuple())))

    def __sub__(self, other: "CohClass") -> "CohClass":
        return CohClass(*(a - b for a, b in zip(self.as_tuple(), other.as_tuple())))

    def __neg__(self) -> "CohClass":
        return CohClass(*(-a for a in self.as_tuple()))

    def scale(self, q) -> "CohClass":
        return CohClass(*(Fraction(q) * a for a in self.as_tuple()))

    def __mul__(self, other: "CohClass") -> "CohClass":
        return ring_product(self, other)

    def dual(self) -> "CohClass":
        """Chern character of the dual bundle: odd complex degrees change sign."""
        return CohClass(self.c0, -self.cH, -self.cL, self.ch, self.cl, -self.cV)

    def integral(self) -> Fraction:
        return -self.cV


ONE = CohClass(c0=1)
H = CohClass(cH=1)
L = CohClass(cL=1)
h = CohClass(ch=1)
l = CohClass(cl=1)  # noqa: E741
V = CohClass(cV=1)


def ring_product(a: CohClass, b: CohClass) -> CohClass:
    """
    Graded product truncated above degree 6.

    H^2 = 8h + 4l, HL = 4h, L^2 = 0, Hh = Ll = -V, Hl = Lh = 0.
    """
    c0 = a.c0 * b.c0
    cH = a.c0 * b.cH + a.cH * b.c0
    cL = a.c0 * b.cL + a.cL * b.c0
    HH = a.cH * b.cH
    HL = a.cH * b.cL + a.cL * b.cH
    ch = a.c0 * b.ch + a.ch * b.c0 + 8 * HH + 4 * HL
    cl = a.c0 * b.cl + a.cl * b.c0 + 4 * HH
    cV = (a.c0 * b.cV + a.cV * b.c0
          - (a.cH * b.ch + a.ch * b.cH)
          - (a.cL * b.cl + a.cl * b.cL))
    return CohClass(c0, cH, cL, ch, cl, cV)


SECOND_CHERN = CohClass(cl=24, ch=56)
TODD = ONE + SECOND_CHERN.scale(Fraction(1, 12))
TODD_INVERSE = ONE - SECOND_CHERN.scale(Fraction(1, 12))


def euler_pairing(e1: CohClass, e2: CohClass) -> Fraction:
    """chi(E1, E2) = integral of ch(E1*) ch(E2) td."""
    return ring_product(ring_product(e1.dual(), e2), TODD).integral()


@dataclass(frozen=True)
class KClassBasis:
    classes: Tuple[CohClass, ...]
    c11: int
    c12: int
    c22: int

    def __post_init__(self):
        if len(self.classes) != 6:
            raise ValueError("a K-class basis has six elements")


def hosono_basis(c11: int = 0, c12: int = 4, c22: int = 0) -> KClassBasis:
    """Ordered (1, H-row, L-row, -H^3/8, h, l) as in the MUM-point monodromy convention."""
    half = Fraction(1, 2)
    b1 = ring_product(H - h.scale(half * c11) - l.scale(half * c12), TODD_INVERSE)
    b2 = ring_product(L - h.scale(half * c12) - l.scale(half * c22), TODD_INVERSE)
    cube = ring_product(H, ring_product(H, H)).scale(Fraction(-1, 8))
    return KClassBasis((ONE, b1, b2, cube, h, l), c11, c12, c22)


def pairing_matrix(basis: KClassBasis) -> sympy.Matrix:
    return sympy.Matrix(6, 6, lambda i, j: sympy.Rational(
        *_as_pair(euler_pairing(basis.classes[i], basis.classes[j]))
    ))


def _as_pair(q: Fraction) -> Tuple[int, int]:
    return q.numerator, q.denominator


def p1_matrix(c11) -> sympy.Matrix:
    """Half-integral change of basis taking the C11 family of MUM monodromies to C11 = 0."""
    matrix = sympy.eye(6)
    matrix[1, 4] = sympy.Rational(c11) / 2
    return matrix
