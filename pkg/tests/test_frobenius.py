from fractions import Fraction

import pytest
import sympy

from octic_monodromy.amodel import Q_FORM
from octic_monodromy.frobenius import (
    J_FORM,
    frobenius_derivative,
    intersection_form_residual,
    intersection_matrix,
    log_solution_basis,
    mum_monodromies,
    w0_coefficient,
    w0_series,
    yukawa,
)
from octic_monodromy.reference import FIRST_LIST
from octic_monodromy.scalarfield import ExactScalar


def test_w0_coefficients():
    assert w0_coefficient(0, 0) == 1
    assert w0_coefficient(1, 0) == Fraction(3, 32)
    assert w0_coefficient(1, 1) == 0
    assert w0_coefficient(-1, 0) == 0
    assert (1, 1) not in w0_series(3)


def test_holomorphic_solution_has_no_logs():
    w0 = frobenius_derivative(0, 0, 4)
    assert list(w0.terms) == [(0, 0)]
    assert w0.coefficient((0, 0), (1, 0)) == ExactScalar.rational(Fraction(3, 32))
    assert w0.monodromy(1) == w0


def test_single_log_solution_shifts_by_w0():
    w0, d_h = log_solution_basis(4)[:2]
    assert d_h.monodromy(1) - d_h == w0
    assert d_h.monodromy(2) == d_h


def test_derivative_order_is_bounded():
    with pytest.raises(ValueError):
        frobenius_derivative(4, 0, 2)


def test_mum_monodromies_match_first_list():
    t1, t2 = mum_monodromies(0)
    assert t1 == FIRST_LIST["T_m1"]
    assert t2 == FIRST_LIST["T_m2"]
    assert t1 * t2 == t2 * t1
    for t in (t1, t2):
        assert t.T * Q_FORM * t == Q_FORM


def test_intersection_matrix_at_mum_point():
    z1, z2 = sympy.symbols("z1 z2")
    at_origin = intersection_matrix().subs({z1: 0, z2: 0}).applyfunc(sympy.simplify)
    assert at_origin == J_FORM
    form = intersection_matrix()
    assert (form + form.T).applyfunc(sympy.simplify).is_zero_matrix


def test_yukawa_couplings():
    couplings = yukawa(1)
    assert set(couplings) == {"K30", "K21", "K12", "K03"}
    z1, z2 = sympy.symbols("z1 z2")
    assert couplings["K30"].subs({z1: 0, z2: 0}) == 2


@pytest.mark.slow
def test_intersection_form_is_flat():
    first, second = intersection_form_residual()
    assert first.is_zero_matrix
    assert second.is_zero_matrix
