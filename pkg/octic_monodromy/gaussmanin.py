"""
Gauss-Manin connection of the two-parameter mirror octic family.

The connection acts on the frame omega = (omega_1, ..., omega_6) through
nabla_{d/dz_k} omega = Gamma^(k) omega with Gamma^(k) = transpose(M^(k)). Coordinates are the
scaled MUM-point coordinates (z1, z2); the other charts are pulled back along their rational
parametrizations of the z chart.
"""

import functools
import logging
from dataclasses import dataclass, field
from typing import Callable, Dict, List, Optional, Sequence, Tuple, Union

import numpy as np
import sympy

from .errors import PoleAtPoint
from .frobenius import LogSeries, power_series_as_log_series

logger = logging.getLogger(__name__)

POLE_TOLERANCE = 1e-12

z1, z2 = sympy.symbols("z1 z2")
u, v = sympy.symbols("u v")
d1, d2 = sympy.symbols("delta1 delta2")

I, pi = sympy.I, sympy.pi
ALPHA = z1 ** 2 * z2 - (1 - z1) ** 2

RatFnMatrix = sympy.ImmutableMatrix


@dataclass(frozen=True)
class Chart:
    """
    Affine chart of the compactified moduli space.

    to_z gives (z1, z2) as rational functions of the chart coordinates (u, v). The charts
    zpp and zppp are double covers: (u, v) and (-u, -v) are the same point.
    """

    name: str
    to_z: Tuple[sympy.Expr, sympy.Expr]
    double_cover: bool = False
    description: str = ""

    def z_point(self, point: Sequence[complex]) -> Tuple[complex, complex]:
        fn = _to_z_function(self.name)
        return tuple(complex(x) for x in fn(complex(point[0]), complex(point[1])))

    def from_z(self, point: Sequence[complex], sign: int = 1) -> Tuple[complex, complex]:
        """Chart coordinates of a z-chart point; sign picks the lift on double covers."""
        a, b = complex(point[0]), complex(point[1])
        if self.name == "z":
            return a, b
        if self.name == "zp":
            return 1 / a, b
        root = sign / np.sqrt(b)
        if self.name == "zpp":
            return complex(root / a), complex(root)
        if self.name == "zppp":
            return complex(a / root), complex(root)
        raise KeyError(self.name)


CHARTS: Dict[str, Chart] = {
    "z": Chart("z", (u, v), description="MUM-point chart (z1, z2)"),
    "zp": Chart("zp", (1 / u, v), description="(z1', z2') = (1/z1, z2)"),
    "zpp": Chart("zpp", (v / u, 1 / v ** 2), double_cover=True,
                 description="(z1'', z2'') = +-(z1^-1 z2^-1/2, z2^-1/2)"),
    "zppp": Chart("zppp", (u * v, 1 / v ** 2), double_cover=True,
                  description="(z1''', z2''') = +-(z1 z2^1/2, z2^-1/2)"),
}


def get_chart(name: str) -> Chart:
    try:
        return CHARTS[name]
    except KeyError:
        raise KeyError(f"Unknown chart {name!r}; expected one of {sorted(CHARTS)}") from None


@dataclass(frozen=True)
class Divisor:
    number: int
    name: str
    chart: str
    equation: Optional[sympy.Expr]
    exceptional: bool = False


@dataclass(frozen=True)
class DivisorSet:
    divisors: Tuple[Divisor, ...] = field(default_factory=tuple)

    def by_name(self, name: str) -> Divisor:
        for divisor in self.divisors:
            if divisor.name == name:
                return divisor
        raise KeyError(name)

    def names(self) -> List[str]:
        return [d.name for d in self.divisors]


DIVISORS = DivisorSet((
    Divisor(1, "C_inf", "z", z2),
    Divisor(2, "D(1,0)", "z", z1),
    Divisor(3, "C0", "zp", u),
    Divisor(4, "D(1,-2)", "zpp", v),
    Divisor(5, "C1", "z", z2 - 1),
    Divisor(6, "C_con", "z", ALPHA),
    Divisor(7, "D(1,-1)", "zppp", None, exceptional=True),
    Divisor(8, "D(0,-1)", "zp", None, exceptional=True),
    Divisor(9, "E0", "zp", None, exceptional=True),
    Divisor(10, "E1", "z", None, exceptional=True),
    Divisor(11, "E2", "z", None, exceptional=True),
))


def _scaled_m1() -> sympy.Matrix:
    """z1 * M^(1)."""
    a = ALPHA
    return sympy.Matrix([
        [0, 0, 0, 0, 3 * pi ** 2 * z1 / (32 * (z1 - 1)),
         -15 * I * pi ** 3 * z1 ** 2 * z2 / (64 * (z1 - 1) * a)],
        [I / (2 * pi), 0, 0, 0, 11 * I * pi * z1 / (32 * (z1 - 1)),
         pi ** 2 * z1 * z2 * (52 * z1 + 3) / (64 * (z1 - 1) * a)],
        [0, 0, 0, 0, 0, -3 * pi ** 2 * z1 * (z1 - 1) * (z2 - 1) / (32 * a)],
        [0, 0, 2 * I / pi, 0, 0, -11 * I * pi * z1 * (z1 - 1) * (z2 - 1) / (8 * a)],
        [0, 2 * I / pi, 0, 0, -3 * z1 / (2 * (z1 - 1)),
         I * pi * z1 * z2 * (49 * z1 + 11) / (16 * (z1 - 1) * a)],
        [0, 0, 0, -I / (2 * pi), I / (pi * (z1 - 1)),
         z1 * (8 * z1 * z2 - 6 * z1 - 3 * z1 ** 2 * z2 + 3 * z1 ** 2 + 3) / (2 * (z1 - 1) * a)],
    ])


def _scaled_m2() -> sympy.Matrix:
    """z2 * M^(2)."""
    a = ALPHA
    return sympy.Matrix([
        [0, 0, 0, -3 * pi ** 2 * z1 * z2 / (128 * (z1 - 1) * (z2 - 1)), 0,
         15 * I * pi ** 3 * z1 ** 2 / (128 * a)],
        [0, 0, z2 / (4 * (z2 - 1)), -11 * I * pi * z1 * z2 / (128 * (z1 - 1) * (z2 - 1)), 0,
         -pi ** 2 * z1 * z2 * (52 * z1 + 3) / (128 * a)],
        [I / (2 * pi), 0, -z2 / (2 * (z2 - 1)), 0, 0,
         -3 * pi ** 2 * z1 * z2 * (2 * z1 - 1) / (64 * a)],
        [0, 2 * I / pi, 2 * I * z2 / (pi * (z2 - 1)), -z2 / (2 * (z2 - 1)), 0,
         -11 * I * pi * z1 * z2 * (2 * z1 - 1) / (16 * a)],
        [0, 0, -I * z2 / (2 * pi * (z2 - 1)), z2 * (5 * z1 - 2) / (8 * (z1 - 1) * (z2 - 1)), 0,
         -I * pi * z1 * z2 * (49 * z1 + 11) / (32 * a)],
        [0, 0, 0, -I * z2 * (2 * z1 - 1) / (4 * pi * (z1 - 1) * (z2 - 1)), -I / (2 * pi),
         -2 * z1 ** 2 * z2 / a],
    ])


@functools.lru_cache(maxsize=None)
def connection_matrices() -> Tuple[RatFnMatrix, RatFnMatrix]:
    """Return (M^(1), M^(2))."""
    m1 = (_scaled_m1() / z1).applyfunc(sympy.cancel)
    m2 = (_scaled_m2() / z2).applyfunc(sympy.cancel)
    return RatFnMatrix(m1), RatFnMatrix(m2)


def gamma_matrices() -> Tuple[RatFnMatrix, RatFnMatrix]:
    m1, m2 = connection_matrices()
    return m1.T, m2.T


def residue_matrix(divisor: str) -> sympy.Matrix:
    """
    Residue of Gamma^(k) along z_k = 0, taken at the MUM point.

    divisor is "z1" or "z2".
    """
    if divisor not in ("z1", "z2"):
        raise ValueError(f"Residues are available for z1 = 0 and z2 = 0, not {divisor!r}")
    scaled = _scaled_m1() if divisor == "z1" else _scaled_m2()
    at_origin = scaled.applyfunc(lambda e: sympy.cancel(e).subs({z1: 0, z2: 0}))
    return sympy.Matrix(at_origin.T).applyfunc(sympy.nsimplify)


def local_monodromy_from_residue(divisor: str) -> sympy.Matrix:
    """exp(-2 pi i Res), exact; the residues are nilpotent so the series terminates."""
    x = (-2 * pi * I * residue_matrix(divisor)).applyfunc(sympy.expand)
    result = sympy.eye(6)
    power = sympy.eye(6)
    for k in range(1, 6):
        power = (power * x).applyfunc(sympy.expand)
        if power.is_zero_matrix:
            break
        result += power / sympy.factorial(k)
    return result.applyfunc(sympy.nsimplify)


def flatness_residual() -> RatFnMatrix:
    """d2 Gamma^(1) - d1 Gamma^(2) + [Gamma^(1), Gamma^(2)], simplified entrywise."""
    g1, g2 = gamma_matrices()
    residual = g1.diff(z2) - g2.diff(z1) + g1 * g2 - g2 * g1
    return RatFnMatrix(residual.applyfunc(lambda e: sympy.cancel(sympy.together(e))))


@functools.lru_cache(maxsize=None)
def pulled_back_connection(chart_name: str) -> Tuple[RatFnMatrix, RatFnMatrix]:
    """Connection matrices (A_u, A_v) in chart coordinates: A = M1 dz1 + M2 dz2."""
    chart = get_chart(chart_name)
    m1, m2 = connection_matrices()
    if chart_name == "z":
        return RatFnMatrix(m1.subs({z1: u, z2: v}, simultaneous=True)), \
            RatFnMatrix(m2.subs({z1: u, z2: v}, simultaneous=True))
    zu, zv = chart.to_z
    substitution = {z1: zu, z2: zv}
    p1 = m1.subs(substitution, simultaneous=True)
    p2 = m2.subs(substitution, simultaneous=True)
    a_u = p1 * sympy.diff(zu, u) + p2 * sympy.diff(zv, u)
    a_v = p1 * sympy.diff(zu, v) + p2 * sympy.diff(zv, v)
    return (RatFnMatrix(a_u.applyfunc(sympy.cancel)), RatFnMatrix(a_v.applyfunc(sympy.cancel)))


@functools.lru_cache(maxsize=None)
def pole_factors(chart_name: str) -> Tuple[Tuple[str, sympy.Expr], ...]:
    """Polynomials in (u, v) whose zeros are poles of the chart's connection."""
    chart = get_chart(chart_name)
    zu, zv = chart.to_z
    factors = []
    for label, expr in (("z1", z1), ("z2", z2), ("z1-1", z1 - 1), ("z2-1", z2 - 1),
                        ("alpha", ALPHA)):
        pulled = sympy.together(expr.subs({z1: zu, z2: zv}, simultaneous=True))
        numerator, _ = sympy.fraction(pulled)
        numerator = sympy.expand(numerator)
        if numerator.free_symbols:
            factors.append((label, numerator))
    if chart_name != "z":
        factors.extend([("u", u), ("v", v)])
    seen, unique = set(), []
    for label, expr in factors:
        key = sympy.srepr(sympy.expand(expr))
        if key not in seen:
            seen.add(key)
            unique.append((label, expr))
    return tuple(unique)


@functools.lru_cache(maxsize=None)
def _pole_functions(chart_name: str) -> Tuple[Tuple[str, Callable], ...]:
    return tuple((label, sympy.lambdify((u, v), expr, "numpy"))
                 for label, expr in pole_factors(chart_name))


@functools.lru_cache(maxsize=None)
def _to_z_function(chart_name: str) -> Callable:
    chart = get_chart(chart_name)
    return sympy.lambdify((u, v), list(chart.to_z), "numpy")


@functools.lru_cache(maxsize=None)
def _entry_functions(chart_name: str) -> Tuple[Tuple[Callable, ...], Tuple[Callable, ...]]:
    a_u, a_v = pulled_back_connection(chart_name)
    return (tuple(sympy.lambdify((u, v), entry, "numpy") for entry in a_u),
            tuple(sympy.lambdify((u, v), entry, "numpy") for entry in a_v))


def nearest_pole(chart_name: str, us, vs) -> Tuple[str, np.ndarray]:
    """Smallest |factor| over the pole factors, with the label of the closest factor."""
    us = np.asarray(us, dtype=complex)
    vs = np.asarray(vs, dtype=complex)
    best_label, best = "", np.full(np.broadcast(us, vs).shape, np.inf)
    for label, fn in _pole_functions(chart_name):
        values = np.abs(np.broadcast_to(np.asarray(fn(us, vs), dtype=complex), best.shape))
        if np.min(values, initial=np.inf) < np.min(best, initial=np.inf):
            best_label = label
        best = np.minimum(best, values)
    return best_label, best


def connection_arrays(chart_name: str, us, vs) -> Tuple[np.ndarray, np.ndarray]:
    """Evaluate (A_u, A_v) at arrays of points; returns two (n, 6, 6) complex arrays."""
    us = np.atleast_1d(np.asarray(us, dtype=complex))
    vs = np.atleast_1d(np.asarray(vs, dtype=complex))
    n = np.broadcast(us, vs).shape[0]
    fu, fv = _entry_functions(chart_name)
    a_u = np.empty((n, 36), dtype=complex)
    a_v = np.empty((n, 36), dtype=complex)
    with np.errstate(divide="ignore", invalid="ignore"):
        for k in range(36):
            a_u[:, k] = np.broadcast_to(fu[k](us, vs), (n,))
            a_v[:, k] = np.broadcast_to(fv[k](us, vs), (n,))
    return a_u.reshape(n, 6, 6), a_v.reshape(n, 6, 6)


def eval_connection(chart: Union[Chart, str], point: Sequence[complex]
                    ) -> Tuple[np.ndarray, np.ndarray]:
    """Numeric connection matrices at one point of a chart."""
    name = chart.name if isinstance(chart, Chart) else chart
    label, distance = nearest_pole(name, [point[0]], [point[1]])
    if distance[0] < POLE_TOLERANCE:
        raise PoleAtPoint(tuple(point), label, float(distance[0]))
    a_u, a_v = connection_arrays(name, [point[0]], [point[1]])
    return a_u[0], a_v[0]


@dataclass(frozen=True)
class PFOperator:
    """
    Differential operator sum_a z^a P_a(delta1, delta2), z-powers written to the left.
    """

    name: str
    expr: sympy.Expr

    def z_terms(self) -> List[Tuple[Tuple[int, int], sympy.Expr]]:
        poly = sympy.Poly(sympy.expand(self.expr), z1, z2)
        return [((int(a), int(b)), coeff) for (a, b), coeff in poly.terms()]


D_PF1 = PFOperator(
    "D_PF1",
    d2 ** 2 - sympy.Rational(1, 4) * z2 * (d1 - 2 * d2) * (d1 - 2 * d2 - 1),
)
D_PF2 = PFOperator(
    "D_PF2",
    d1 ** 2 * (d1 - 2 * d2)
    - sympy.Rational(1, 64) * z1 * (4 * d1 + 1) * (4 * d1 + 2) * (4 * d1 + 3),
)
PICARD_FUCHS = (D_PF1, D_PF2)


def apply_operator(op: PFOperator, series: LogSeries) -> LogSeries:
    """Apply op to a log series; the result is exact up to the series' order."""
    result = LogSeries.zero(series.order)
    cache: Dict[Tuple[int, int], LogSeries] = {(0, 0): series}

    def delta_power(i: int, j: int) -> LogSeries:
        if (i, j) not in cache:
            if i > 0:
                cache[(i, j)] = delta_power(i - 1, j).delta(1)
            else:
                cache[(i, j)] = delta_power(i, j - 1).delta(2)
        return cache[(i, j)]

    for shift, coefficient in op.z_terms():
        poly = sympy.Poly(coefficient, d1, d2)
        for (i, j), c in poly.terms():
            term = delta_power(int(i), int(j)).scale_rational(c).shift(shift)
            result = result + term
    return result


def pf_annihilates(op: PFOperator, series: Union[LogSeries, Dict[Tuple[int, int], object]]
                   ) -> bool:
    """True iff every computable coefficient of op(series) vanishes."""
    if not isinstance(series, LogSeries):
        series = power_series_as_log_series(series)
    if series.order < 4:
        raise ValueError("series must be truncated at total degree >= 4")
    return apply_operator(op, series).is_zero()
