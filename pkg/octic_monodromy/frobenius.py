"""
Frobenius solutions at the MUM point, Yukawa couplings and the intersection form.

Log solutions are derivatives in (H, L) of the generating function

    w(z; H, L) = sum_d A(d + eps) z^(d + eps),   eps = (H, L) / (2 pi i),

normalized by A(eps), written with lambda_k = log(z_k) / (2 pi i).
"""

import functools
import logging
from fractions import Fraction
from math import comb, factorial
from typing import Dict, List, Optional, Tuple

import sympy

from .amodel import hosono_basis, ring_product, CohClass, H, L
from .scalarfield import ExactScalar

logger = logging.getLogger(__name__)

Exponent = Tuple[int, int]

# Highest total (H, L) derivative order needed by the six log solutions.
EPS_DEGREE = 3

_TWO_PI_I_INV = ExactScalar({(-1, -1): Fraction(1, 2)})


def w0_coefficient(d1: int, d2: int) -> Fraction:
    """(4 d1)! / ((d2!)^2 (d1!)^3 (d1 - 2 d2)!) / 2^(8 d1 + 2 d2), zero when d1 < 2 d2."""
    if d1 < 0 or d2 < 0 or d1 < 2 * d2:
        return Fraction(0)
    numerator = factorial(4 * d1)
    denominator = factorial(d2) ** 2 * factorial(d1) ** 3 * factorial(d1 - 2 * d2)
    return Fraction(numerator, denominator) / 2 ** (8 * d1 + 2 * d2)


def w0_series(order: int) -> Dict[Exponent, Fraction]:
    """Holomorphic period truncated at total degree order."""
    return {
        (a, b): w0_coefficient(a, b)
        for a in range(order + 1) for b in range(order + 1 - a)
        if w0_coefficient(a, b) != 0
    }


class LogSeries:
    """
    Truncated series sum_p lambda1^p1 lambda2^p2 * f_p(z) with exact coefficients.

    terms maps log exponents p to {z exponent d: ExactScalar}; only total z-degree
    <= order is kept.
    """

    def __init__(self, terms: Optional[Dict[Exponent, Dict[Exponent, ExactScalar]]] = None,
                 order: int = 0):
        self.order = order
        self.terms: Dict[Exponent, Dict[Exponent, ExactScalar]] = {}
        for p, coefficients in (terms or {}).items():
            kept = {d: c for d, c in coefficients.items()
                    if sum(d) <= order and not c.is_zero()}
            if kept:
                self.terms[p] = kept

    @classmethod
    def zero(cls, order: int) -> "LogSeries":
        return cls({}, order)

    def coefficient(self, p: Exponent, d: Exponent) -> ExactScalar:
        return self.terms.get(p, {}).get(d, ExactScalar())

    def power_part(self, p: Exponent = (0, 0)) -> Dict[Exponent, ExactScalar]:
        return dict(self.terms.get(p, {}))

    def is_zero(self) -> bool:
        return not self.terms

    def __add__(self, other: "LogSeries") -> "LogSeries":
        order = min(self.order, other.order)
        merged: Dict[Exponent, Dict[Exponent, ExactScalar]] = {
            p: dict(c) for p, c in self.terms.items()
        }
        for p, coefficients in other.terms.items():
            target = merged.setdefault(p, {})
            for d, c in coefficients.items():
                target[d] = target.get(d, ExactScalar()) + c
        return LogSeries(merged, order)

    def __neg__(self) -> "LogSeries":
        return self.scale(ExactScalar.rational(-1))

    def __sub__(self, other: "LogSeries") -> "LogSeries":
        return self + (-other)

    def __eq__(self, other) -> bool:
        if not isinstance(other, LogSeries):
            return NotImplemented
        return (self - other).is_zero()

    def scale(self, factor) -> "LogSeries":
        if not isinstance(factor, ExactScalar):
            factor = ExactScalar.rational(Fraction(factor))
        return LogSeries({p: {d: c * factor for d, c in cs.items()}
                          for p, cs in self.terms.items()}, self.order)

    def scale_rational(self, q) -> "LogSeries":
        q = sympy.Rational(q)
        return self.scale(Fraction(int(q.p), int(q.q)))

    def shift(self, exponent: Exponent) -> "LogSeries":
        """Multiply by z^exponent."""
        a1, a2 = exponent
        return LogSeries({p: {(d[0] + a1, d[1] + a2): c for d, c in cs.items()}
                          for p, cs in self.terms.items()}, self.order)

    def delta(self, k: int) -> "LogSeries":
        """Apply delta_k = z_k d/dz_k; delta_k lambda_k = 1 / (2 pi i)."""
        index = k - 1
        result: Dict[Exponent, Dict[Exponent, ExactScalar]] = {}
        for p, cs in self.terms.items():
            for d, c in cs.items():
                if d[index]:
                    target = result.setdefault(p, {})
                    target[d] = target.get(d, ExactScalar()) + c * d[index]
                if p[index]:
                    lowered = (p[0] - 1, p[1]) if index == 0 else (p[0], p[1] - 1)
                    target = result.setdefault(lowered, {})
                    target[d] = target.get(d, ExactScalar()) + c * p[index] * _TWO_PI_I_INV
        return LogSeries(result, self.order)

    def monodromy(self, k: int) -> "LogSeries":
        """Continuation along z_k -> e^(2 pi i) z_k, i.e. lambda_k -> lambda_k + 1."""
        index = k - 1
        result: Dict[Exponent, Dict[Exponent, ExactScalar]] = {}
        for p, cs in self.terms.items():
            for j in range(p[index] + 1):
                lowered = (p[0] - j, p[1]) if index == 0 else (p[0], p[1] - j)
                target = result.setdefault(lowered, {})
                weight = comb(p[index], j)
                for d, c in cs.items():
                    target[d] = target.get(d, ExactScalar()) + c * weight
        return LogSeries(result, self.order)

    def __repr__(self):
        return f"LogSeries(order={self.order}, log_terms={sorted(self.terms)})"


def power_series_as_log_series(series: Dict[Exponent, object],
                               order: Optional[int] = None) -> LogSeries:
    if order is None:
        order = max((sum(d) for d in series), default=0)
    coefficients = {
        d: c if isinstance(c, ExactScalar) else ExactScalar.rational(Fraction(c))
        for d, c in series.items()
    }
    return LogSeries({(0, 0): coefficients}, order)


class _EpsSeries:
    """Bivariate series in (eps1, eps2) truncated above total degree EPS_DEGREE."""

    __slots__ = ("c",)

    def __init__(self, c: Dict[Exponent, Fraction]):
        self.c = {k: q for k, q in c.items() if sum(k) <= EPS_DEGREE and q != 0}

    @classmethod
    def linear(cls, constant, e1=0, e2=0) -> "_EpsSeries":
        return cls({(0, 0): Fraction(constant), (1, 0): Fraction(e1), (0, 1): Fraction(e2)})

    def __mul__(self, other: "_EpsSeries") -> "_EpsSeries":
        out: Dict[Exponent, Fraction] = {}
        for (i1, j1), q1 in self.c.items():
            for (i2, j2), q2 in other.c.items():
                if i1 + i2 + j1 + j2 <= EPS_DEGREE:
                    key = (i1 + i2, j1 + j2)
                    out[key] = out.get(key, Fraction(0)) + q1 * q2
        return _EpsSeries(out)

    def inverse(self) -> "_EpsSeries":
        c0 = self.c.get((0, 0), Fraction(0))
        if c0 == 0:
            raise ZeroDivisionError("eps series without constant term")
        t = _EpsSeries({k: q / c0 for k, q in self.c.items() if k != (0, 0)})
        result = _EpsSeries({(0, 0): Fraction(1)})
        power = _EpsSeries({(0, 0): Fraction(1)})
        for m in range(1, EPS_DEGREE + 1):
            power = power * t
            sign = -1 if m % 2 else 1
            result = _EpsSeries({
                k: result.c.get(k, Fraction(0)) + sign * power.c.get(k, Fraction(0))
                for k in set(result.c) | set(power.c)
            })
        return _EpsSeries({k: q / c0 for k, q in result.c.items()})


def _normalized_coefficient(d1: int, d2: int) -> _EpsSeries:
    """A(d + eps) / A(eps) expanded in eps."""
    one = _EpsSeries({(0, 0): Fraction(1)})
    numerator = one
    for k in range(4 * d1):
        numerator = numerator * _EpsSeries.linear(1 + k, e1=4)
    denominator = one
    for k in range(1, d2 + 1):
        factor = _EpsSeries.linear(k, e2=1)
        denominator = denominator * factor * factor
    for k in range(1, d1 + 1):
        factor = _EpsSeries.linear(k, e1=1)
        denominator = denominator * factor * factor * factor
    n = d1 - 2 * d2
    if n >= 0:
        for k in range(1, n + 1):
            denominator = denominator * _EpsSeries.linear(k, e1=1, e2=-2)
    else:
        for k in range(-n):
            numerator = numerator * _EpsSeries.linear(-k, e1=1, e2=-2)
    scale = Fraction(1, 2 ** (8 * d1 + 2 * d2))
    result = numerator * denominator.inverse()
    return _EpsSeries({k: q * scale for k, q in result.c.items()})


@functools.lru_cache(maxsize=None)
def _eps_expansion(order: int) -> Dict[Exponent, Dict[Exponent, Fraction]]:
    """Map eps exponent (i, j) -> {z exponent: coefficient}."""
    table: Dict[Exponent, Dict[Exponent, Fraction]] = {}
    for a in range(order + 1):
        for b in range(order + 1 - a):
            for eps_key, q in _normalized_coefficient(a, b).c.items():
                table.setdefault(eps_key, {})[(a, b)] = q
    return table


def frobenius_derivative(a: int, b: int, order: int) -> LogSeries:
    """d^a/dH^a d^b/dL^b w(z; H, L) at H = L = 0."""
    if a + b > EPS_DEGREE:
        raise ValueError(f"derivatives above total order {EPS_DEGREE} are not expanded")
    expansion = _eps_expansion(order)
    terms: Dict[Exponent, Dict[Exponent, ExactScalar]] = {}
    for i in range(a + 1):
        for j in range(b + 1):
            m1, m2 = a - i, b - j
            weight = comb(a, i) * comb(b, j) * factorial(m1) * factorial(m2)
            # weight * (2 pi i)^-(m1 + m2)
            scalar = ExactScalar({(-(m1 + m2), -(m1 + m2)): Fraction(weight, 2 ** (m1 + m2))})
            target = terms.setdefault((i, j), {})
            for d, q in expansion.get((m1, m2), {}).items():
                target[d] = target.get(d, ExactScalar()) + scalar * q
    return LogSeries(terms, order)


def log_solution_basis(order: int, c11: int = 0) -> List[LogSeries]:
    """
    The six period coefficients in basis order (w0, w1^(1), w2^(1), w^(3), w1^(2), w2^(2)).
    """
    d = functools.partial(frobenius_derivative, order=order)
    w0, dH, dL = d(0, 0), d(1, 0), d(0, 1)
    dHH, dHL = d(2, 0), d(1, 1)
    dHHH, dHHL = d(3, 0), d(2, 1)
    c_v = (dH.scale(Fraction(-14, 3)) + dL.scale(-2)
           + dHHH.scale(Fraction(-4, 3)) + dHHL.scale(-2))
    c_h = dH.scale(Fraction(c11, 2)) + dL.scale(2) + dHH.scale(4) + dHL.scale(4)
    c_l = dH.scale(2) + dHH.scale(2)
    logger.debug(f"Built six log solutions to order {order} (C11 = {c11})")
    return [w0, dH, dL, c_v, c_h, c_l]


def _coordinates(basis, target: CohClass) -> sympy.Matrix:
    columns = sympy.Matrix(6, 6, lambda i, j: sympy.Rational(
        basis.classes[j].as_tuple()[i].numerator, basis.classes[j].as_tuple()[i].denominator
    ))
    values = sympy.Matrix(6, 1, lambda i, _: sympy.Rational(
        target.as_tuple()[i].numerator, target.as_tuple()[i].denominator
    ))
    return columns.LUsolve(values)


def _exponential(divisor: CohClass) -> CohClass:
    power = CohClass(c0=1)
    total = CohClass(c0=1)
    for k in range(1, 4):
        power = ring_product(power, divisor)
        total = total + power.scale(Fraction(1, factorial(k)))
    return total


def coefficient_monodromy(divisor: CohClass, c11: int = 0) -> sympy.Matrix:
    """Matrix of multiplication by exp(divisor) on the K-class basis, columns = images."""
    basis = hosono_basis(c11)
    factor = _exponential(divisor)
    matrix = sympy.zeros(6, 6)
    for j, cls in enumerate(basis.classes):
        matrix[:, j] = _coordinates(basis, ring_product(factor, cls))
    return matrix


def mum_monodromies(c11: int = 0) -> Tuple[sympy.Matrix, sympy.Matrix]:
    """(T_m1, T_m2) = (M^T)^-1 for multiplication by e^H and e^L."""
    t1 = coefficient_monodromy(H, c11).T.inv()
    t2 = coefficient_monodromy(L, c11).T.inv()
    return t1, t2


# Yukawa couplings and the intersection form

z1, z2 = sympy.symbols("z1 z2")
DEFAULT_YUKAWA_CONSTANT = 1 / (2 * sympy.I * sympy.pi ** 3)


def yukawa(c=DEFAULT_YUKAWA_CONSTANT) -> Dict[str, sympy.Expr]:
    """K^(3,0), K^(2,1), K^(1,2), K^(0,3) up to the constant c."""
    discriminant = (1 - z1) ** 2 - z1 ** 2 * z2
    k30 = 2 * c / discriminant
    return {
        "K30": k30,
        "K21": (1 - z1) / 2 * k30,
        "K12": z2 * (2 * z1 - 1) / (1 - z2) * k30,
        "K03": z2 * (1 - z1 + z2 - 3 * z1 * z2) / (2 * (1 - z2) ** 2) * k30,
    }


def _delta(expr: sympy.Expr, k: int) -> sympy.Expr:
    var = z1 if k == 1 else z2
    return var * sympy.diff(expr, var)


def intersection_matrix(c=DEFAULT_YUKAWA_CONSTANT) -> sympy.Matrix:
    """Antisymmetric I(z) = (omega_i . omega_j); equals J at the origin for the default c."""
    k = yukawa(c)
    pi, i_unit = sympy.pi, sympy.I
    discriminant = (1 - z1) ** 2 - z1 ** 2 * z2
    upper = {
        (0, 5): k["K21"],
        (1, 3): k["K21"],
        (1, 4): k["K30"],
        (1, 5): i_unit * pi * (_delta(k["K21"], 1) + _delta(k["K30"], 2)),
        (2, 3): k["K12"],
        (2, 4): k["K21"],
        (2, 5): 2 * i_unit * pi * _delta(k["K12"], 1),
        (3, 4): i_unit * pi / 4 * (_delta(k["K21"], 1) - _delta(k["K30"], 2)),
    }
    matrix = sympy.zeros(6, 6)
    for (r, s), value in upper.items():
        matrix[r, s] = -2 * i_unit * pi ** 3 * value
    matrix[3, 5] = 3 * i_unit * pi ** 5 * c * z1 ** 2 * z2 * (z1 - 3) / (8 * discriminant ** 2)
    matrix[4, 5] = (i_unit * pi ** 5 * c * z1
                    * (3 - 10 * z1 + 18 * z1 * z2 + 7 * z1 ** 2 - 7 * z1 ** 2 * z2)
                    / (8 * discriminant ** 2))
    for r in range(6):
        for s in range(r):
            matrix[r, s] = -matrix[s, r]
    return matrix


J_FORM = sympy.ImmutableMatrix([
    [0, 0, 0, 0, 0, -1],
    [0, 0, 0, -1, -2, 0],
    [0, 0, 0, 0, -1, 0],
    [0, 1, 0, 0, 0, 0],
    [0, 2, 1, 0, 0, 0],
    [1, 0, 0, 0, 0, 0],
])


def intersection_form_residual(c=DEFAULT_YUKAWA_CONSTANT) -> Tuple[sympy.Matrix, sympy.Matrix]:
    """d_k I - (Gamma^(k) I + I Gamma^(k)^T) for k = 1, 2, simplified; both vanish."""
    from .gaussmanin import gamma_matrices

    form = intersection_matrix(c)
    g1, g2 = gamma_matrices()
    residuals = []
    for var, gamma in ((z1, g1), (z2, g2)):
        residual = form.diff(var) - (gamma * form + form * gamma.T)
        residuals.append(residual.applyfunc(lambda e: sympy.cancel(sympy.together(e))))
    return residuals[0], residuals[1]
