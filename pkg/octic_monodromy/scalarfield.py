"""
Exact arithmetic kernel.

ExactScalar holds finite sums q * i^a * pi^b with rational q, which is the scalar field of
the period frame and the connection. MultiPoly is a rational multivariate polynomial used
by the case checker; Gröbner bases and normal forms are delegated to sympy.
"""

import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Iterable, List, Sequence, Tuple, Union

import mpmath
import sympy

logger = logging.getLogger(__name__)

ComplexValue = mpmath.mpc

DEFAULT_PRECISION_BITS = 128
MONOMIAL_ORDERS = ("grevlex", "lex", "grlex")

Number = Union[int, Fraction]


class ExactScalar:
    """
    Element of Q[i][pi, 1/pi].

    Terms are keyed by (a, b) for i^a * pi^b. The i-power is normalized into {0, 1}
    using i^2 = -1, so equal values always have equal term maps.
    """

    __slots__ = ("_terms",)

    def __init__(self, terms: Dict[Tuple[int, int], Number] = None):
        normalized: Dict[Tuple[int, int], Fraction] = {}
        for (a, b), q in (terms or {}).items():
            a = a % 4
            q = Fraction(q)
            if a >= 2:
                q = -q
                a -= 2
            key = (a, int(b))
            normalized[key] = normalized.get(key, Fraction(0)) + q
        self._terms = {key: q for key, q in normalized.items() if q != 0}

    @classmethod
    def rational(cls, q: Number) -> "ExactScalar":
        return cls({(0, 0): q})

    @classmethod
    def monomial(cls, q: Number, i_power: int = 0, pi_power: int = 0) -> "ExactScalar":
        return cls({(i_power, pi_power): q})

    @property
    def terms(self) -> Dict[Tuple[int, int], Fraction]:
        return dict(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def _coerce(self, other) -> "ExactScalar":
        if isinstance(other, ExactScalar):
            return other
        if isinstance(other, (int, Fraction)):
            return ExactScalar.rational(other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        merged = dict(self._terms)
        for key, q in other._terms.items():
            merged[key] = merged.get(key, Fraction(0)) + q
        return ExactScalar(merged)

    __radd__ = __add__

    def __neg__(self):
        return ExactScalar({key: -q for key, q in self._terms.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        product: Dict[Tuple[int, int], Fraction] = {}
        for (a1, b1), q1 in self._terms.items():
            for (a2, b2), q2 in other._terms.items():
                key = (a1 + a2, b1 + b2)
                product[key] = product.get(key, Fraction(0)) + q1 * q2
        return ExactScalar(product)

    __rmul__ = __mul__

    def __pow__(self, exponent: int):
        if not isinstance(exponent, int):
            return NotImplemented
        if exponent < 0:
            if len(self._terms) != 1:
                raise ZeroDivisionError("only monomials are invertible in this kernel")
            ((a, b), q), = self._terms.items()
            return ExactScalar({(-a * -exponent, -b * -exponent): 1 / q ** -exponent})
        result = ExactScalar.rational(1)
        for _ in range(exponent):
            result = result * self
        return result

    def __eq__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return False
        return self._terms == other._terms

    def __hash__(self):
        return hash(frozenset(self._terms.items()))

    def __repr__(self):
        if not self._terms:
            return "ExactScalar(0)"
        parts = []
        for (a, b), q in sorted(self._terms.items()):
            factors = [str(q)]
            if a:
                factors.append("i")
            if b:
                factors.append(f"pi^{b}")
            parts.append("*".join(factors))
        return f"ExactScalar({' + '.join(parts)})"

    def to_sympy(self) -> sympy.Expr:
        return sympy.Add(*[
            sympy.Rational(q.numerator, q.denominator) * sympy.I ** a * sympy.pi ** b
            for (a, b), q in self._terms.items()
        ])

    @classmethod
    def from_sympy(cls, expr) -> "ExactScalar":
        """Parse an expanded sympy expression built from rationals, I and pi."""
        terms: Dict[Tuple[int, int], Fraction] = {}
        for term in sympy.Add.make_args(sympy.expand(sympy.sympify(expr))):
            if term == 0:
                continue
            coeff, rest = term.as_coeff_Mul()
            if not coeff.is_Rational:
                raise ValueError(f"Not an exact scalar term: {term}")
            a = b = 0
            for base, power in rest.as_powers_dict().items():
                if base == 1:
                    continue
                if base == sympy.I and power.is_Integer:
                    a += int(power)
                elif base == sympy.pi and power.is_Integer:
                    b += int(power)
                elif base == -1 and power == sympy.Rational(1, 2):
                    a += 1
                else:
                    raise ValueError(f"Not an exact scalar term: {term}")
            key = (a, b)
            terms[key] = terms.get(key, Fraction(0)) + Fraction(int(coeff.p), int(coeff.q))
        return cls(terms)


I_UNIT = ExactScalar.monomial(1, i_power=1)
PI = ExactScalar.monomial(1, pi_power=1)


def scalar_eval(s: ExactScalar, precision: int = DEFAULT_PRECISION_BITS) -> ComplexValue:
    """Evaluate at the given binary precision; rational parts are converted last."""
    with mpmath.workprec(precision):
        total = mpmath.mpc(0)
        for (a, b), q in s.terms.items():
            unit = mpmath.mpc(0, 1) if a else mpmath.mpc(1)
            total += unit * mpmath.power(mpmath.pi, b) * (mpmath.mpf(q.numerator) / q.denominator)
        return +total


@dataclass(frozen=True)
class MultiPoly:
    """Polynomial over Q in an ordered list of variable names."""

    variables: Tuple[str, ...]
    terms: Tuple[Tuple[Tuple[int, ...], Fraction], ...]

    def __post_init__(self):
        for exponents, coefficient in self.terms:
            if len(exponents) != len(self.variables):
                raise ValueError("exponent vector length does not match variables")
            if coefficient == 0:
                raise ValueError("zero coefficients are not stored")

    @property
    def symbols(self) -> Tuple[sympy.Symbol, ...]:
        return tuple(sympy.Symbol(name) for name in self.variables)

    @classmethod
    def from_expr(cls, expr, variables: Sequence[str]) -> "MultiPoly":
        symbols = [sympy.Symbol(name) for name in variables]
        poly = sympy.Poly(sympy.expand(sympy.sympify(expr)), *symbols, domain=sympy.QQ)
        terms = tuple(sorted(
            (tuple(int(e) for e in monom), Fraction(int(c.p), int(c.q)))
            for monom, c in poly.terms() if c != 0
        ))
        return cls(tuple(variables), terms)

    def to_expr(self) -> sympy.Expr:
        symbols = self.symbols
        return sympy.Add(*[
            sympy.Rational(c.numerator, c.denominator)
            * sympy.Mul(*[s ** e for s, e in zip(symbols, exponents)])
            for exponents, c in self.terms
        ])

    def is_zero(self) -> bool:
        return not self.terms

    def __str__(self):
        return str(self.to_expr())


def _shared_variables(polys: Iterable[MultiPoly]) -> Tuple[str, ...]:
    variables = None
    for poly in polys:
        if variables is None:
            variables = poly.variables
        elif poly.variables != variables:
            raise ValueError(f"Polynomials use different variables: {variables} vs {poly.variables}")
    return variables or ()


def _check_order(order: str):
    if order not in MONOMIAL_ORDERS:
        raise ValueError(f"Unknown monomial order {order!r}")


def groebner_basis(polys: List[MultiPoly], order: str = "grevlex") -> List[MultiPoly]:
    """
    Reduced, monic Gröbner basis of the ideal generated by polys.

    The variable list order is the variable total order (first variable largest).
    Every input is checked to reduce to zero modulo the result.
    """
    _check_order(order)
    nonzero = [p for p in polys if not p.is_zero()]
    if not nonzero:
        return []
    variables = _shared_variables(nonzero)
    symbols = nonzero[0].symbols
    basis = sympy.groebner([p.to_expr() for p in nonzero], *symbols, order=order, domain=sympy.QQ)
    result = []
    for g in basis.polys:
        lc = g.LC(order=order)
        result.append(MultiPoly.from_expr(sympy.expand(g.as_expr() / lc), variables))
    for p in nonzero:
        if not poly_reduce(p, result, order).is_zero():
            raise ArithmeticError(f"Input {p} does not reduce to zero modulo its Gröbner basis")
    logger.debug(f"Gröbner basis ({order}, {variables}) has {len(result)} generators")
    return result


def poly_reduce(p: MultiPoly, basis: List[MultiPoly], order: str = "grevlex") -> MultiPoly:
    """Normal form of p modulo basis."""
    _check_order(order)
    if not basis:
        return p
    variables = _shared_variables([p, *basis])
    _, remainder = sympy.reduced(
        p.to_expr(), [b.to_expr() for b in basis], *p.symbols, order=order, domain=sympy.QQ
    )
    return MultiPoly.from_expr(remainder, variables)


def s_polynomial(f: MultiPoly, g: MultiPoly, order: str = "grevlex") -> MultiPoly:
    """S-polynomial of f and g, used to re-verify Buchberger's criterion."""
    _check_order(order)
    symbols = f.symbols
    pf = sympy.Poly(f.to_expr(), *symbols, domain=sympy.QQ)
    pg = sympy.Poly(g.to_expr(), *symbols, domain=sympy.QQ)
    mf, mg = pf.LM(order=order), pg.LM(order=order)
    lcm_exponents = tuple(max(a, b) for a, b in zip(mf.exponents, mg.exponents))
    lcm = sympy.Mul(*[s ** e for s, e in zip(symbols, lcm_exponents)])
    lead_f = pf.LC(order=order) * sympy.Mul(*[s ** e for s, e in zip(symbols, mf.exponents)])
    lead_g = pg.LC(order=order) * sympy.Mul(*[s ** e for s, e in zip(symbols, mg.exponents)])
    expr = sympy.expand(lcm / lead_f * f.to_expr() - lcm / lead_g * g.to_expr())
    return MultiPoly.from_expr(expr, f.variables)
