from fractions import Fraction

import mpmath
import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from octic_monodromy.scalarfield import (
    I_UNIT,
    PI,
    ExactScalar,
    MultiPoly,
    groebner_basis,
    poly_reduce,
    s_polynomial,
    scalar_eval,
)

_keys = st.tuples(st.integers(min_value=0, max_value=3), st.integers(min_value=-3, max_value=3))
_rationals = st.fractions(min_value=-5, max_value=5, max_denominator=6)
scalars = st.dictionaries(_keys, _rationals, max_size=4).map(ExactScalar)


@given(scalars, scalars, scalars)
def test_scalar_ring_axioms(x, y, z):
    assert x + y == y + x
    assert x * y == y * x
    assert (x * y) * z == x * (y * z)
    assert x * (y + z) == x * y + x * z
    assert (x - x).is_zero()


def test_i_squared_is_minus_one():
    assert I_UNIT * I_UNIT == ExactScalar.rational(-1)
    assert I_UNIT ** 4 == 1
    assert ExactScalar({(3, 0): 1}) == -I_UNIT


def test_monomial_inverse():
    value = ExactScalar.monomial(Fraction(2, 3), i_power=1, pi_power=2)
    assert value * value ** -1 == 1
    with pytest.raises(ZeroDivisionError):
        (PI + 1) ** -1


def test_sympy_conversion():
    value = ExactScalar({(0, 0): Fraction(1, 2), (1, -3): 3, (0, 2): -1})
    assert sympy.simplify(value.to_sympy() - (sympy.Rational(1, 2) + 3 * sympy.I / sympy.pi ** 3
                                             - sympy.pi ** 2)) == 0
    assert ExactScalar.from_sympy(value.to_sympy()) == value
    with pytest.raises(ValueError):
        ExactScalar.from_sympy(sympy.sqrt(2))


def test_scalar_eval_uses_working_precision():
    with mpmath.workprec(200):
        expected = +mpmath.pi
        assert abs(scalar_eval(PI, 200) - expected) < mpmath.mpf(2) ** -190
    yukawa = ExactScalar({(-1, -3): Fraction(1, 2)})
    z = scalar_eval(yukawa, 128)
    assert abs(complex(z) - 1 / (2j * mpmath.pi ** 3)) < 1e-15


def test_groebner_of_small_ideal():
    x, y = sympy.symbols("x y")
    polys = [MultiPoly.from_expr(x * y - 1, ("x", "y")), MultiPoly.from_expr(x - y, ("x", "y"))]
    basis = groebner_basis(polys, "lex")
    assert MultiPoly.from_expr(y ** 2 - 1, ("x", "y")) in basis
    assert poly_reduce(MultiPoly.from_expr(x ** 2 - 1, ("x", "y")), basis, "lex").is_zero()


def test_groebner_rejects_unknown_order():
    with pytest.raises(ValueError):
        groebner_basis([MultiPoly.from_expr(sympy.Symbol("x"), ("x",))], "revlex")


def test_multipoly_rejects_zero_coefficients():
    with pytest.raises(ValueError):
        MultiPoly(("x",), (((1,), Fraction(0)),))


_small = st.integers(min_value=-3, max_value=3)


@settings(max_examples=50, deadline=None)
@given(st.lists(st.tuples(_small, _small, _small), min_size=2, max_size=3))
def test_s_polynomials_of_basis_reduce_to_zero(coefficients):
    x, y = sympy.symbols("x y")
    polys = [MultiPoly.from_expr(p * x ** 2 + q * x * y + r * y + 1, ("x", "y"))
             for p, q, r in coefficients]
    basis = groebner_basis(polys, "grevlex")
    for i, f in enumerate(basis):
        for g in basis[i + 1:]:
            assert poly_reduce(s_polynomial(f, g), basis).is_zero()
