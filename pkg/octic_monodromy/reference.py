"""
Printed reference data: numerical and integral monodromies, the mirror-map matrix, the
nilpotent logarithms and the adapted transforms used by the fan checker.

The cones and fan stages can run from these integral matrices alone; the snap stage
compares its own results against them.
"""

from typing import Dict

import numpy as np
import sympy

Rat = sympy.Rational


def _int_matrix(rows) -> sympy.ImmutableMatrix:
    return sympy.ImmutableMatrix(rows)


# Monodromies in the omega frame around z1 = 0 and z2 = 0.
S_M1 = _int_matrix([
    [1, 1, 0, 0, 2, Rat(-4, 3)],
    [0, 1, 0, 0, 4, -4],
    [0, 0, 1, 4, 0, -2],
    [0, 0, 0, 1, 0, -1],
    [0, 0, 0, 0, 1, -2],
    [0, 0, 0, 0, 0, 1],
])
S_M2 = _int_matrix([
    [1, 0, 1, 0, 0, 0],
    [0, 1, 0, 4, 0, 0],
    [0, 0, 1, 0, 0, 0],
    [0, 0, 0, 1, 0, 0],
    [0, 0, 0, 0, 1, -1],
    [0, 0, 0, 0, 0, 1],
])

# Conifold monodromy from b2', four significant digits.
S_CON1 = np.array([
    [1.003 - 29.51j, 69.37 + 0.0064j, 49.72 + 0.004587j,
     -0.04224 + 457.9j, -0.02736 + 296.5j, 872.8 + 0.08052j],
    [35.55 + 0.004223j, 0.9901 + 83.56j, -0.007114 + 59.9j,
     -551.6 - 0.06551j, -357.2 - 0.04243j, -0.1249 + 1051.0j],
    [10.03 + 0.001375j, -0.003232 + 23.57j, 0.9977 + 16.89j,
     -155.6 - 0.02133j, -100.7 - 0.01381j, -0.04066 + 296.5j],
    [-0.0004211 + 2.347j, -5.516 - 0.0009899j, -3.954 - 0.0007095j,
     1.007 - 36.41j, 0.004231 - 23.58j, -69.4 - 0.01245j],
    [-0.001059 + 6.378j, -14.99 - 0.002489j, -10.75 - 0.001784j,
     0.01643 - 98.97j, 1.011 - 64.08j, -188.6 - 0.03131j],
    [0.9991 + 0.0002574j, -0.000605 + 2.349j, -0.0004336 + 1.683j,
     -15.5 - 0.003993j, -10.04 - 0.002586j, 0.9924 + 29.55j],
], dtype=complex)

# Normalized mirror-map matrix at C11 = 0, four significant digits.
R_PRINTED = np.array([
    [1.0, 2.347j, 1.685j, -15.48, -10.01, 29.39j],
    [0, -1.0, 0, 4.0 - 6.739j, -2.0 - 9.386j, -40.17 + 3.37j],
    [0, 0, -1.0, -2.0 - 9.386j, 0, -12.01 + 4.693j],
    [0, 0, 0, 0, 0, -1.0],
    [0, 0, 0, 1.0, 0, -2.347j],
    [0, 0, 0, -2.0, 1.0, -1.685j],
], dtype=complex)
R_FREE_PRINTED = {"R12": 2.347j, "R13": 1.685j, "R16": 29.39j}

# Integral monodromies before the P2 change of basis.
FIRST_LIST: Dict[str, sympy.ImmutableMatrix] = {
    "T_m1": _int_matrix([
        [1, -1, 0, 6, 4, 0],
        [0, 1, 0, -4, -8, -4],
        [0, 0, 1, -4, -4, 0],
        [0, 0, 0, 1, 0, 0],
        [0, 0, 0, 1, 1, 0],
        [0, 0, 0, 0, 0, 1],
    ]),
    "T_m2": _int_matrix([
        [1, 0, -1, 2, -2, 0],
        [0, 1, 0, -2, -4, 0],
        [0, 0, 1, 0, 0, 0],
        [0, 0, 0, 1, 0, 0],
        [0, 0, 0, 0, 1, 0],
        [0, 0, 0, 1, 0, 1],
    ]),
    "T_C1^2": _int_matrix([
        [1, 0, 0, 0, 0, 0],
        [0, 1, 0, 0, 0, 0],
        [0, 0, 1, 0, 0, 4],
        [0, 0, 0, 1, 0, 0],
        [0, 0, 0, 0, 1, 0],
        [0, 0, 0, 0, 0, 1],
    ]),
    "T_con1": _int_matrix([
        [1, 0, 0, 0, 0, 0],
        [0, 1, 0, 0, 0, 0],
        [0, 0, 1, 0, 0, 0],
        [-1, 0, 0, 1, 0, 0],
        [0, 0, 0, 0, 1, 0],
        [0, 0, 0, 0, 0, 1],
    ]),
    "T_E2^2": _int_matrix([
        [1, 0, 0, 0, 0, 0],
        [0, 1, -4, 0, -24, 0],
        [0, 0, 1, 0, 0, 0],
        [0, 0, 0, 1, 0, 0],
        [0, 0, 0, 0, 1, 0],
        [0, 0, 2, 0, -4, 1],
    ]),
    "T_E0^4": _int_matrix([
        [-15, -8, 0, 32, 0, -16],
        [0, 1, 0, 0, 0, 0],
        [8, 4, 1, -16, 0, 8],
        [-8, -4, 0, 17, 0, -8],
        [-4, -2, 0, 8, 1, -4],
        [0, 0, 0, 0, 0, 1],
    ]),
    "T_con2": _int_matrix([
        [-1, -2, 2, 4, 4, -8],
        [-2, -1, 2, 4, 4, -8],
        [4, 4, -3, -8, -8, 16],
        [-1, -1, 1, 3, 2, -4],
        [-1, -1, 1, 2, 3, -4],
        [1, 1, -1, -2, -2, 5],
    ]),
}

# Monodromies that only give one-dimensional cones.
T_C0 = _int_matrix([
    [-1, -1, 2, -2, 8, -4],
    [2, 3, -2, -8, 4, 12],
    [0, 0, 1, 0, 4, 0],
    [0, 0, 1, -3, 6, 0],
    [0, 0, 0, -1, 1, 0],
    [-1, -1, 1, 2, 2, -3],
])
T_D11 = _int_matrix([
    [1, 0, -1, 2, -2, 0],
    [0, 1, 0, 2, -4, 4],
    [0, 1, -1, -4, -8, -2],
    [0, 0, 0, 1, 0, 0],
    [0, 0, 0, 1, 1, 1],
    [0, 0, 0, -1, 0, -1],
])
T_D12 = sympy.ImmutableMatrix(sympy.eye(6))

DEGENERATE = {"T_C0": T_C0, "T_D(1,-1)": T_D11, "T_D(1,-2)": T_D12}

P2 = _int_matrix([
    [1, 0, 0, -2, 0, 0],
    [0, -1, 0, 0, 0, -4],
    [0, 0, -1, 0, -4, 0],
    [0, 0, 0, 1, 0, 0],
    [0, 0, 0, 0, -1, 0],
    [0, 0, 0, 0, 0, -1],
])

SECOND_LIST: Dict[str, sympy.ImmutableMatrix] = {
    "T_m1": _int_matrix([
        [1, 1, 0, 6, -4, -4],
        [0, 1, 0, 4, -8, -4],
        [0, 0, 1, 0, -4, 0],
        [0, 0, 0, 1, 0, 0],
        [0, 0, 0, -1, 1, 0],
        [0, 0, 0, 0, 0, 1],
    ]),
    "T_m2": _int_matrix([
        [1, 0, 1, 2, -2, 0],
        [0, 1, 0, -2, -4, 0],
        [0, 0, 1, 0, 0, 0],
        [0, 0, 0, 1, 0, 0],
        [0, 0, 0, 0, 1, 0],
        [0, 0, 0, -1, 0, 1],
    ]),
    "T_C1^2": FIRST_LIST["T_C1^2"],
    "T_con1": _int_matrix([
        [3, 0, 0, 4, 0, 0],
        [0, 1, 0, 0, 0, 0],
        [0, 0, 1, 0, 0, 0],
        [-1, 0, 0, -1, 0, 0],
        [0, 0, 0, 0, 1, 0],
        [0, 0, 0, 0, 0, 1],
    ]),
    "T_E2^2": _int_matrix([
        [1, 0, 0, 0, 0, 0],
        [0, 1, 4, 0, -24, 0],
        [0, 0, 1, 0, 0, 0],
        [0, 0, 0, 1, 0, 0],
        [0, 0, 0, 0, 1, 0],
        [0, 0, 2, 0, -4, 1],
    ]),
    "T_E0^4": _int_matrix([
        [1, 0, 0, 0, 0, 0],
        [0, 1, 0, 0, 0, 0],
        [8, -4, 1, 0, 0, 8],
        [-8, 4, 0, 1, 0, -8],
        [4, -2, 0, 0, 1, 4],
        [0, 0, 0, 0, 0, 1],
    ]),
    "T_con2": _int_matrix([
        [1, 0, 0, 0, 0, 0],
        [-2, 3, -2, 0, 4, 0],
        [0, 0, 1, 0, 0, 0],
        [-1, 1, -1, 1, 2, 0],
        [1, -1, 1, 0, -1, 0],
        [-1, 1, -1, 0, 2, 1],
    ]),
}

# Unipotent generator behind each nilpotent logarithm.
GENERATOR_LABELS = {
    "N1": "T_m1", "N2": "T_m2", "N3": "T_C1^2", "N4": "T_con1",
    "N5": "T_E2^2", "N6": "T_E0^4", "N7": "T_con2",
}

NILPOTENT_LOGS: Dict[str, sympy.ImmutableMatrix] = {
    "N1": _int_matrix([
        [0, 1, 0, Rat(14, 3), 0, -2],
        [0, 0, 0, 0, -8, -4],
        [0, 0, 0, -2, -4, 0],
        [0, 0, 0, 0, 0, 0],
        [0, 0, 0, -1, 0, 0],
        [0, 0, 0, 0, 0, 0],
    ]),
    "N2": _int_matrix([
        [0, 0, 1, 2, -2, 0],
        [0, 0, 0, -2, -4, 0],
        [0, 0, 0, 0, 0, 0],
        [0, 0, 0, 0, 0, 0],
        [0, 0, 0, 0, 0, 0],
        [0, 0, 0, -1, 0, 0],
    ]),
    "N3": _int_matrix([
        [0, 0, 0, 0, 0, 0],
        [0, 0, 0, 0, 0, 0],
        [0, 0, 0, 0, 0, 4],
        [0, 0, 0, 0, 0, 0],
        [0, 0, 0, 0, 0, 0],
        [0, 0, 0, 0, 0, 0],
    ]),
    "N4": _int_matrix([
        [2, 0, 0, 4, 0, 0],
        [0, 0, 0, 0, 0, 0],
        [0, 0, 0, 0, 0, 0],
        [-1, 0, 0, -2, 0, 0],
        [0, 0, 0, 0, 0, 0],
        [0, 0, 0, 0, 0, 0],
    ]),
    "N5": _int_matrix([
        [0, 0, 0, 0, 0, 0],
        [0, 0, 4, 0, -24, 0],
        [0, 0, 0, 0, 0, 0],
        [0, 0, 0, 0, 0, 0],
        [0, 0, 0, 0, 0, 0],
        [0, 0, 2, 0, -4, 0],
    ]),
    "N6": _int_matrix([
        [0, 0, 0, 0, 0, 0],
        [0, 0, 0, 0, 0, 0],
        [8, -4, 0, 0, 0, 8],
        [-8, 4, 0, 0, 0, -8],
        [4, -2, 0, 0, 0, 4],
        [0, 0, 0, 0, 0, 0],
    ]),
    "N7": _int_matrix([
        [0, 0, 0, 0, 0, 0],
        [-2, 2, -2, 0, 4, 0],
        [0, 0, 0, 0, 0, 0],
        [-1, 1, -1, 0, 2, 0],
        [1, -1, 1, 0, -2, 0],
        [-1, 1, -1, 0, 2, 0],
    ]),
}

# Cone generators and the printed type triples.
CONE_GENERATORS = {
    "12": ("N1", "N2"),
    "13": ("N1", "N3"),
    "34": ("N3", "N4"),
    "45": ("N4", "N5"),
    "52": ("N5", "N2"),
    "63": ("N6", "N3"),
    "67": ("N6", "N7"),
}
CONE_TYPES = {
    "12": ("IV2", "IV2", "II1"),
    "13": ("IV2", "IV2", "I1"),
    "34": ("I1", "I2", "I1"),
    "45": ("I1", "II1", "II0"),
    "52": ("II0", "II1", "II1"),
    "63": ("I1", "I2", "I1"),
    "67": ("I1", "I2", "I1"),
}

# Adapted transform shared by the two type IV2 cones: G = (T_B^T)^-1.
G_IV2 = _int_matrix([
    [1, 0, 0, 0, Rat(7, 3), 1],
    [0, 0, 1, 1, -2, 0],
    [0, -1, 1, Rat(-4, 3), -2, 2],
    [0, 0, 0, 1, 0, 0],
    [0, 0, 0, 0, 1, 1],
    [0, 0, 0, 0, -1, 0],
])

# Integral symplectic transforms taking the three type I2 cones to span(E14, E25).
G_I2 = {
    "34": _int_matrix([
        [1, 0, 0, 1, 0, 0],
        [0, 0, 1, 0, 0, 0],
        [0, 1, 0, 0, 0, 0],
        [1, 0, 0, 2, 0, 0],
        [0, 0, 0, 0, 0, 1],
        [0, 0, 0, 0, 1, 0],
    ]),
    "63": _int_matrix([
        [0, 0, 1, 0, -2, 0],
        [0, 0, 0, 0, 1, 0],
        [1, 0, 0, 0, 0, 0],
        [0, 0, 0, 0, 0, 1],
        [2, -1, 0, 0, 0, 2],
        [0, 0, 0, 1, 2, 0],
    ]),
    "67": _int_matrix([
        [0, 0, 0, 1, 1, 0],
        [0, 0, 0, 1, 2, 0],
        [0, 0, 1, 2, 2, 0],
        [-2, 1, 0, 0, 0, -2],
        [1, -1, 1, 0, -2, 0],
        [0, 0, 0, 1, 2, 1],
    ]),
}

# Integral symplectic transform taking the weight filtration of N52 to that of N45.
G1_4552 = _int_matrix([
    [0, 2, 0, 0, 1, 0],
    [1, 0, 0, 0, 0, 0],
    [0, 0, 1, 0, 0, 0],
    [0, -1, 0, 0, 0, 0],
    [0, 0, 0, 1, 0, 0],
    [0, 0, 0, 0, 0, 1],
])


def g_ii1_52(s1, t1) -> sympy.Matrix:
    """Transform over Q[i, sqrt 2, sqrt t1, u] taking s1 N5 + t1 N2 to the II1 standard form."""
    i, r2 = sympy.I, sympy.sqrt(2)
    u = sympy.sqrt(4 * s1 + t1)
    return sympy.Matrix([
        [1 / sympy.sqrt(2 * t1), 0, 0, 0, 0, 0],
        [i / (2 * u), r2 * i / (4 * u), 0, 0, 0, (i - i / r2) / u],
        [-i / (2 * u), r2 * i / (4 * u), 0, 0, 0, (-i - i / r2) / u],
        [0, 0, sympy.sqrt(t1 / 2), sympy.sqrt(2 * t1), -sympy.sqrt(2 * t1), 0],
        [0, 0, i * u / 2, 0, -(1 + r2) * i * u, 0],
        [0, 0, -i * u / 2, 0, (1 - r2) * i * u, 0],
    ])


def g_ii1_45(s1, t1) -> sympy.Matrix:
    """Transform over Q[i, sqrt 2, sqrt s1, sqrt t1] taking s1 N4 + t1 N5 to the II1 standard form."""
    i = sympy.I
    rs, rt = sympy.sqrt(s1), sympy.sqrt(t1)
    r2t = sympy.sqrt(2 * t1)
    return sympy.Matrix([
        [0, 0, 0, 1 / rs, 0, 0],
        [0, -i / (4 * rt), 0, 0, 0, i / (2 * rt)],
        [0, 0, 0, 0, 0, -i / r2t],
        [-rs, 0, 0, -2 * rs, 0, 0],
        [0, 0, 0, 0, 4 * i * rt, 0],
        [0, 0, -i * r2t, 0, 2 * i * r2t, 0],
    ])


# Standard form of a type II1 nilpotent: the identity in the upper right 3x3 block.
N_ST_II1 = sympy.ImmutableMatrix(6, 6, lambda r, c: 1 if c == r + 3 else 0)


def standard_i2(s, t) -> sympy.Matrix:
    """s E14 + t E25."""
    matrix = sympy.zeros(6, 6)
    matrix[0, 3] = s
    matrix[1, 4] = t
    return matrix
