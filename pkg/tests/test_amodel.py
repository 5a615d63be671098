import sympy
from hypothesis import given
from hypothesis import strategies as st

from octic_monodromy.amodel import (
    H,
    L,
    ONE,
    Q_FORM,
    CohClass,
    euler_pairing,
    hosono_basis,
    h,
    l,
    p1_matrix,
    pairing_matrix,
)


def test_ring_relations():
    assert H * H == CohClass(ch=8, cl=4)
    assert H * L == CohClass(ch=4)
    assert L * L == CohClass()
    assert (H * H * H).integral() == 8
    assert (H * H * L).integral() == 4
    assert (H * h).integral() == 1
    assert (L * l).integral() == 1
    assert (L * h).integral() == 0


_rationals = st.fractions(min_value=-4, max_value=4, max_denominator=4)
classes = st.builds(CohClass, _rationals, _rationals, _rationals, _rationals, _rationals,
                    _rationals)


@given(classes, classes)
def test_ring_product_commutes(a, b):
    assert a * b == b * a


@given(classes, classes)
def test_euler_pairing_is_antisymmetric(a, b):
    assert euler_pairing(a, b) == -euler_pairing(b, a)


def test_euler_pairing_of_structure_sheaf():
    assert euler_pairing(ONE, ONE) == 0


def test_hosono_basis_pairing_is_minus_q():
    assert pairing_matrix(hosono_basis(0, 4, 0)) == -Q_FORM
    assert pairing_matrix(hosono_basis()) == -Q_FORM


def test_hosono_basis_cube_class():
    cube = hosono_basis().classes[3]
    assert cube.cV == 1
    assert cube.integral() == -1


def test_p1_matrix():
    assert p1_matrix(0) == sympy.eye(6)
    assert p1_matrix(1)[1, 4] == sympy.Rational(1, 2)
    assert p1_matrix(2).det() == 1
