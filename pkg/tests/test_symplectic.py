import numpy as np
import sympy

from octic_monodromy.amodel import Q_FORM
from octic_monodromy.reference import FIRST_LIST, NILPOTENT_LOGS, SECOND_LIST
from octic_monodromy.symplectic import (
    adjoint,
    in_congruence_subgroup,
    is_symplectic,
    is_symplectic_numeric,
    level_generators,
    random_words,
    symplectic_inverse,
)


def test_reference_lists_are_symplectic():
    assert is_symplectic(Q_FORM)
    for matrix in (*FIRST_LIST.values(), *SECOND_LIST.values()):
        assert is_symplectic(matrix)


def test_symplectic_inverse():
    for matrix in SECOND_LIST.values():
        assert symplectic_inverse(matrix) * matrix == sympy.eye(6)


def test_level_generators_lie_in_congruence_subgroup():
    generators = level_generators(3)
    assert len(generators) == 36
    for g in generators:
        assert is_symplectic_numeric(g)
        assert in_congruence_subgroup(sympy.Matrix(g.tolist()), 3)
    assert not in_congruence_subgroup(sympy.Matrix(generators[0].tolist()), 2)
    assert not in_congruence_subgroup(sympy.diag(2, 1, 1, 1, 1, 1), 1)


def test_random_words_come_with_inverses():
    words, inverses = random_words(12, 4, 10, np.random.default_rng(1))
    assert words.shape == (10, 6, 6)
    for word, inverse in zip(words, inverses):
        assert np.array_equal(word @ inverse, np.eye(6, dtype=np.int64))
        assert is_symplectic_numeric(word)


def test_adjoint_action():
    n = NILPOTENT_LOGS["N1"]
    assert adjoint(sympy.eye(6), n) == n
    g = sympy.Matrix(level_generators(1)[0].tolist())
    assert adjoint(symplectic_inverse(g), adjoint(g, n)) == n
