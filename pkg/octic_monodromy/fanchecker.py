"""
Verification that the adjoint orbits of the seven nilpotent cones meet only along shared
cones.

Pairings of cones with equal interior type are checked case by case. A case moves both
cones to an adapted frame, parametrizes the frame change by a Levi element and reduces the
commutation condition Ad(H) N(s1, t1) = N'(s2, t2) to a polynomial or integer system. Every
step of the reduction is recorded together with the identity that was re-checked by exact
arithmetic; a failing check raises InconclusiveCase.

The randomized orbit search is an independent falsifier: it samples words in a principal
congruence subgroup and looks for interior points shared by Ad(H) sigma and sigma'.
"""

import logging
from dataclasses import dataclass, field
from math import gcd
from typing import Callable, Dict, Iterable, List, Optional, Sequence, Tuple

import numpy as np
import sympy

from .errors import InconclusiveCase
from .lmhs import canonical, weight_filtration
from .reference import (
    CONE_GENERATORS,
    G1_4552,
    G_I2,
    G_IV2,
    N_ST_II1,
    NILPOTENT_LOGS,
    g_ii1_45,
    g_ii1_52,
    standard_i2,
)
from .scalarfield import MultiPoly, groebner_basis, poly_reduce
from .symplectic import adjoint, is_symplectic, random_words

logger = logging.getLogger(__name__)

NO_INTERSECTION = "no_nontrivial_intersection"
COUNTEREXAMPLE = "counterexample"
INCONCLUSIVE = "inconclusive"
SIGNS = (1, -1)

a, b, c, d = sympy.symbols("a b c d", integer=True)
s1, t1, s2, t2 = sympy.symbols("s1 t1 s2 t2", positive=True)
SYSTEM_VARIABLES = ("a", "b", "c", "d", "s1", "t1", "s2", "t2")


@dataclass(frozen=True)
class CaseSpec:
    case_id: str
    left: str
    right: str
    lmhs_type: str
    level: int
    method: str


CASES: Tuple[CaseSpec, ...] = (
    CaseSpec("12x12'", "12", "12", "IV2", 3, "levi"),
    CaseSpec("12x13", "12", "13", "IV2", 2, "levi"),
    CaseSpec("13x13'", "13", "13", "IV2", 1, "levi"),
    CaseSpec("52x52'", "52", "52", "II1", 1, "units"),
    CaseSpec("45x45'", "45", "45", "II1", 1, "units"),
    CaseSpec("45x52", "45", "52", "II1", 1, "levi"),
    CaseSpec("34x34'", "34", "34", "I2", 1, "units"),
    CaseSpec("63x63'", "63", "63", "I2", 1, "units"),
    CaseSpec("67x67'", "67", "67", "I2", 1, "units"),
)

SEARCH_PAIRINGS: Tuple[Tuple[str, str], ...] = (
    ("12", "12"), ("12", "13"), ("13", "13"),
    ("52", "52"), ("45", "45"), ("45", "52"),
    ("34", "34"), ("63", "63"), ("67", "67"),
    ("34", "63"), ("34", "67"), ("63", "67"),
)


def get_case(case_id: str) -> CaseSpec:
    for case in CASES:
        if case.case_id == case_id:
            return case
    raise KeyError(f"Unknown fan case {case_id!r}; known: {[c.case_id for c in CASES]}")


@dataclass
class EvidenceStep:
    claim: str
    kind: str
    detail: str = ""

    def to_dict(self) -> dict:
        return {"claim": self.claim, "kind": self.kind, "detail": self.detail}


@dataclass
class Verdict:
    case_id: str
    level: int
    result: str
    evidence: List[EvidenceStep] = field(default_factory=list)
    counterexample: Optional[dict] = None

    def to_dict(self) -> dict:
        return {
            "case_id": self.case_id,
            "level": self.level,
            "result": self.result,
            "evidence": [step.to_dict() for step in self.evidence],
            "counterexample": self.counterexample,
        }


def _vanishes(expr) -> bool:
    expr = sympy.sympify(expr)
    numerator, _ = sympy.fraction(sympy.together(sympy.expand(expr)))
    if sympy.expand(numerator) == 0:
        return True
    return sympy.simplify(expr) == 0


def _matrix_vanishes(matrix) -> bool:
    return all(_vanishes(entry) for entry in sympy.Matrix(matrix))


def _constant_residue(expr, modulus: int) -> Optional[int]:
    """Residue of an integer polynomial that is constant mod modulus, else None."""
    expr = sympy.expand(expr)
    if not expr.free_symbols:
        return int(expr) % modulus
    poly = sympy.Poly(expr, *sorted(expr.free_symbols, key=str))
    constant = 0
    for monom, coefficient in poly.terms():
        if not coefficient.is_integer:
            return None
        if any(monom):
            if coefficient % modulus:
                return None
        else:
            constant = int(coefficient)
    return constant % modulus


def _no_integer_solution(expr) -> bool:
    """True when the gcd of the non-constant coefficients does not divide the constant term."""
    poly = sympy.Poly(sympy.expand(expr), *sorted(expr.free_symbols, key=str))
    divisor, constant = 0, 0
    for monom, coefficient in poly.terms():
        if any(monom):
            divisor = gcd(divisor, int(coefficient))
        else:
            constant = int(coefficient)
    return divisor != 0 and constant % divisor != 0


_R = sympy.Symbol("r")


def _split_sqrt2(expr) -> Tuple[sympy.Expr, sympy.Expr]:
    """(p, q) with expr = p + q sqrt 2."""
    reduced = sympy.rem(sympy.expand(sympy.sympify(expr).subs(sympy.sqrt(2), _R)), _R ** 2 - 2, _R)
    reduced = sympy.expand(reduced)
    return reduced.coeff(_R, 0), reduced.coeff(_R, 1)


class _Chain:
    def __init__(self, case_id: str):
        self.case_id = case_id
        self.steps: List[EvidenceStep] = []

    def identity(self, claim: str, expr, detail: str = ""):
        if not _vanishes(expr):
            raise InconclusiveCase(self.case_id, f"identity does not hold: {claim}")
        self.steps.append(EvidenceStep(claim, "identity", detail))

    def matrix_identity(self, claim: str, matrix, detail: str = ""):
        if not _matrix_vanishes(matrix):
            raise InconclusiveCase(self.case_id, f"matrix identity does not hold: {claim}")
        self.steps.append(EvidenceStep(claim, "identity", detail))

    def fact(self, claim: str, holds: bool, kind: str = "integer", detail: str = ""):
        if not holds:
            raise InconclusiveCase(self.case_id, f"check failed: {claim}")
        self.steps.append(EvidenceStep(claim, kind, detail))

    def assume(self, claim: str):
        self.steps.append(EvidenceStep(claim, "assumption"))


# Adapted forms ------------------------------------------------------------------------------

def _sparse(entries: Dict[Tuple[int, int], sympy.Expr]) -> sympy.Matrix:
    matrix = sympy.zeros(6, 6)
    for (row, col), value in entries.items():
        matrix[row - 1, col - 1] = value
    return matrix


def adapted_iv2_form(cone: str, s, t) -> sympy.Matrix:
    """Ad(G) (s Ni + t Nj) for the two type IV2 cones in the frame adapted to the graded module."""
    if cone == "12":
        return _sparse({(1, 2): s + t, (1, 3): -s, (2, 6): 4 * s, (3, 5): 4 * s,
                        (3, 6): -4 * t, (5, 4): -s - t, (6, 4): s})
    if cone == "13":
        return _sparse({(1, 2): s, (1, 3): -s, (2, 5): 4 * t, (2, 6): 4 * s + 4 * t,
                        (3, 5): 4 * s + 4 * t, (3, 6): 4 * t, (5, 4): -s, (6, 4): s})
    raise KeyError(f"Cone {cone} is not of type IV2")


# (E14, E25) coefficients of Ad(G_c) Ni and Ad(G_c) Nj for the three type I2 cones.
I2_IMAGES = {
    "34": ((0, 4), (1, 0)),
    "63": ((0, 2), (4, 0)),
    "67": ((2, 0), (0, 1)),
}


def cone_operator(cone: str, s, t) -> sympy.Matrix:
    left, right = CONE_GENERATORS[cone]
    return s * sympy.Matrix(NILPOTENT_LOGS[left]) + t * sympy.Matrix(NILPOTENT_LOGS[right])


def _ii1_transform(cone: str):
    return g_ii1_52 if cone == "52" else g_ii1_45


def _ratio_form(cone: str, ratio_s, ratio_t) -> sympy.Matrix:
    if cone == "52":
        return _sparse({(1, 4): ratio_t, (2, 5): ratio_s, (3, 6): ratio_s})
    return _sparse({(1, 4): ratio_s, (2, 5): ratio_t, (3, 6): ratio_t})


II1_SAMPLES = ((1, 1, 2, 3), (3, 2, 1, 5), (sympy.Rational(1, 2), 7, 2, sympy.Rational(1, 3)))


def _numeric(matrix) -> np.ndarray:
    return np.array(sympy.Matrix(matrix).evalf(30).tolist(), dtype=complex)


def _check_ii1_transform(chain: _Chain, cone: str, samples=II1_SAMPLES):
    """Ad(G(s1,t1)) N(s1,t1) = N_st and Ad(G(s1,t1)) N(s2,t2) is the ratio form, to 1e-10."""
    transform = _ii1_transform(cone)
    worst = 0.0
    for p1, q1, p2, q2 in samples:
        g = _numeric(transform(sympy.sympify(p1), sympy.sympify(q1)))
        g_inv = np.linalg.inv(g)
        standard = g @ _numeric(cone_operator(cone, p1, q1)) @ g_inv - _numeric(N_ST_II1)
        if cone == "52":
            ratios = (sympy.Rational(4 * p2 + q2) / (4 * p1 + q1), sympy.Rational(q2) / q1)
        else:
            ratios = (sympy.Rational(p2) / p1, sympy.Rational(q2) / q1)
        other = g @ _numeric(cone_operator(cone, p2, q2)) @ g_inv \
            - _numeric(_ratio_form(cone, *ratios))
        worst = max(worst, float(np.max(np.abs(standard))), float(np.max(np.abs(other))))
    chain.fact(f"G_{cone}(s1,t1) takes N_{cone}(s1,t1) to the II1 standard form and "
               f"N_{cone}(s2,t2) to the diagonal ratio form", worst < 1e-10, kind="numeric",
               detail=f"max deviation {worst:.2e} over {len(samples)} samples")


def adapted_transform(case: CaseSpec, chain: Optional[_Chain] = None):
    """G of the case, after checking the adapted form it produces."""
    chain = chain or _Chain(case.case_id)
    if case.lmhs_type == "IV2":
        for cone in {case.left, case.right}:
            chain.matrix_identity(
                f"Ad(G) N_{cone}(s,t) is the adapted form",
                adjoint(G_IV2, cone_operator(cone, s1, t1)) - adapted_iv2_form(cone, s1, t1),
            )
        chain.fact("G is symplectic", is_symplectic(G_IV2), kind="identity")
        return G_IV2
    if case.lmhs_type == "II1":
        for cone in {case.left, case.right}:
            _check_ii1_transform(chain, cone)
        if case.left != case.right:
            chain.fact("G1 is integral symplectic", is_symplectic(G1_4552), kind="identity")
            w52 = weight_filtration(cone_operator("52", 1, 1)).spaces[2]
            w45 = weight_filtration(cone_operator("45", 1, 1)).spaces[2]
            moved = [G1_4552 * vector for vector in w52]
            chain.fact("G1 maps W_2 of N52 onto W_2 of N45 = <2e1 - e4, e2, e6>",
                       canonical(moved) == canonical(w45), kind="identity")
            return G1_4552
        return _ii1_transform(case.left)(s1, t1)
    g = G_I2[case.left]
    chain.fact(f"G_{case.left} is integral symplectic", is_symplectic(g), kind="identity")
    (p_s, q_s), (p_t, q_t) = I2_IMAGES[case.left]
    image = adjoint(g, cone_operator(case.left, s1, t1))
    chain.matrix_identity(
        f"Ad(G_{case.left}) N_{case.left}(s,t) lies in the positive span of E14, E25",
        image - standard_i2(p_s * s1 + p_t * t1, q_s * s1 + q_t * t1),
    )
    return g


# Levi systems for the type IV2 cases ---------------------------------------------------------

def levi_template(sn: int, sd: int) -> sympy.Matrix:
    """diag(sn, A, sn, A^-T) with det A = -sd, written through the entries of A."""
    return sympy.Matrix([
        [sn, 0, 0, 0, 0, 0],
        [0, a, b, 0, 0, 0],
        [0, c, d, 0, 0, 0],
        [0, 0, 0, sn, 0, 0],
        [0, 0, 0, 0, -sd * d, sd * c],
        [0, 0, 0, 0, sd * b, -sd * a],
    ])


def _levi_matrix(case: CaseSpec, sn: int, sd: int) -> sympy.Matrix:
    levi = levi_template(sn, sd)
    first = adapted_iv2_form(case.left, s1, t1)
    second = adapted_iv2_form(case.right, s2, t2)
    return (levi * first - second * levi).applyfunc(sympy.expand)


def _plain(expr) -> sympy.Expr:
    return sympy.sympify(expr).xreplace({sym: sympy.Symbol(sym.name) for sym in expr.free_symbols})


def commutation_system(case: CaseSpec, sn: int, sd: int) -> List[MultiPoly]:
    """Nonzero entries of L M(s1,t1) - M'(s2,t2) L as polynomials in a, b, c, d, s1, t1, s2, t2."""
    system = _levi_matrix(case, sn, sd)
    return [MultiPoly.from_expr(_plain(entry), SYSTEM_VARIABLES)
            for entry in system if entry != 0]


def _entry(matrix: sympy.Matrix, label: str) -> sympy.Expr:
    return matrix[int(label[1]) - 1, int(label[2]) - 1]


def _forces_equal_parameters(chain: _Chain, claim: str, matrix: sympy.Matrix):
    """Every entry vanishes at t1 = t2 and some entry does not vanish otherwise."""
    remaining = [sympy.expand(entry) for entry in matrix if sympy.expand(entry) != 0]
    chain.fact(claim, bool(remaining) and all(_vanishes(e.subs(t1, t2)) for e in remaining),
               kind="identity", detail=f"{len(remaining)} entries proportional to t1 - t2")


def _h_from_levi(sn: int, sd: int) -> sympy.Matrix:
    return G_IV2.inv() * levi_template(sn, sd) * G_IV2


def solution_family_12(bound: int = 50) -> List[dict]:
    """Integral points of the b != 0 branch of the 12x12' system: d = -a, b = -3a - sn."""
    points = []
    for sn in SIGNS:
        for value in range(-bound, bound + 1):
            denominator = 3 * value + sn
            if (value * value - 1) % denominator:
                continue
            points.append({
                "a": value, "b": -3 * value - sn, "c": (value * value - 1) // denominator,
                "d": -value, "sn": sn,
            })
    return points


def _case_12_12(chain: _Chain, case: CaseSpec):
    for sn in SIGNS:
        trivial = _levi_matrix(case, sn, -1).subs({a: sn, d: sn, b: 0, c: 0, s2: s1, t2: t1})
        chain.matrix_identity(f"sn={sn}: L = sn Id with (s1,t1)=(s2,t2) solves the system", trivial)
    for sn in SIGNS:
        for sd in SIGNS:
            tag = f"sn={sn}, sd={sd}"
            system = _levi_matrix(case, sn, sd)
            chain.identity(f"{tag}: S25 = 4b(s1 - sd s2)",
                           _entry(system, "S25") - 4 * b * (s1 - sd * s2))
            # b = 0
            chain.identity(f"{tag}, b=0: S26 = 4a(s1 + sd s2) with a d = -sd so a != 0",
                           _entry(system, "S26").subs(b, 0) - 4 * a * (s1 + sd * s2))
            if sd == 1:
                chain.fact(f"{tag}, b=0: s1 + s2 > 0 leaves S26 nonzero",
                           (s1 + sd * s2).is_positive is True, kind="sign")
            else:
                values = {b: 0, s2: s1}
                chain.identity(f"{tag}, b=0: S13 = (d - sn) s1, so d = sn",
                               _entry(system, "S13").subs(values) - (d - sn) * s1)
                values[d] = sn
                chain.fact(f"{tag}, b=0: a d = 1 forces a = sn",
                           sympy.solve(a * sn - 1, a) == [sn], kind="identity")
                values[a] = sn
                chain.identity(f"{tag}, b=0: S36 + 4 S12 = 12 c s1, so c = 0",
                               (_entry(system, "S36") + 4 * _entry(system, "S12")).subs(values)
                               - 12 * c * s1)
                values[c] = 0
                _forces_equal_parameters(chain, f"{tag}, b=0: remaining entries force t1 = t2",
                                         system.subs(values))
            # b != 0
            if sd == -1:
                chain.fact(f"{tag}, b!=0: S25 = 4b(s1 + s2) is nonzero",
                           (s1 - sd * s2).is_positive is True, kind="sign")
                continue
            chain.identity(f"{tag}, b!=0, s1=s2=s: S26 = 8as - 4b t1",
                           _entry(system, "S26").subs(s2, s1) - (8 * a * s1 - 4 * b * t1))
            chain.identity(f"{tag}, b!=0, s1=s2=s: S35 = 8ds + 4b t2",
                           _entry(system, "S35").subs(s2, s1) - (8 * d * s1 + 4 * b * t2))
            values = {s2: s1, t1: 2 * a * s1 / b, t2: -2 * d * s1 / b}
            e1 = 2 * a * d - a * b + b * c + 2 * sn * a + sn * b
            e2 = b - 3 * d + sn
            e3 = 2 * a * d + b * c + b * d + sn * b - 2 * sn * d
            e4 = 3 * a + b + sn
            chain.identity(f"{tag}: S13 = -s E2", _entry(system, "S13").subs(values) + s1 * e2)
            chain.identity(f"{tag}: S64 = -s E4", _entry(system, "S64").subs(values) + s1 * e4)
            chain.identity(f"{tag}: b S12 / s = E1", b * _entry(system, "S12").subs(values) / s1 - e1)
            chain.identity(f"{tag}: b S54 / s = E3", b * _entry(system, "S54").subs(values) / s1 - e3)
            chain.identity(f"{tag}: E4 - E2 = 3(a + d), so d = -a", e4 - e2 - 3 * (a + d))
            b_value = -3 * a - sn
            chain.identity(f"{tag}: E4 = 0 with d = -a gives b = -3a - sn",
                           e4.subs(b, b_value))
            chain.identity(f"{tag}: E1 reduces to a^2 + bc - 1",
                           e1.subs({d: -a}).subs(b, b_value) - (a ** 2 + b_value * c - 1))
            chain.identity(f"{tag}: the (3,2) entry of H = G^-1 L G is -b",
                           _h_from_levi(sn, sd)[2, 1] + b)
            residue = _constant_residue(b_value, case.level)
            chain.fact(f"{tag}: b = -3a - sn is {residue} mod 3, but H = Id mod 3 needs b = 0 mod 3",
                       residue not in (None, 0), kind="congruence")
    family = solution_family_12()
    chain.fact("integral points of the b != 0 family for |a| <= 50 all have b != 0 mod 3",
               all(point["b"] % 3 != 0 for point in family), kind="enumeration",
               detail=f"{len(family)} integral points")


def eliminated_inputs(case: CaseSpec, sn: int, sd: int) -> List[MultiPoly]:
    """
    Generators in a, c, d, b left from the commutation system once s2 = 1, s1 = sn (d - b)
    and t1 = sn (a - c - d + b) are substituted and t2 is eliminated between the entries
    that are linear in it.
    """
    plain = {name: sympy.Symbol(name) for name in SYSTEM_VARIABLES}
    pa, pb, pc, pd, pt2 = (plain[name] for name in ("a", "b", "c", "d", "t2"))
    values = {plain["s2"]: 1, plain["s1"]: sn * (pd - pb), plain["t1"]: sn * (pa - pc - pd + pb)}
    free, linear = [], []
    for poly in commutation_system(case, sn, sd):
        entry = sympy.expand(poly.to_expr().subs(values))
        if entry == 0:
            continue
        degree = sympy.degree(entry, pt2)
        if degree > 1:
            raise ArithmeticError(f"entry {entry} is not linear in t2")
        (linear if degree else free).append(entry)
    if linear:
        pivot = linear[0]
        alpha = pivot.coeff(pt2, 1)
        for entry in linear[1:]:
            beta = entry.coeff(pt2, 1)
            common = sympy.gcd(alpha, beta)
            free.append(sympy.expand(sympy.cancel(beta / common) * pivot
                                     - sympy.cancel(alpha / common) * entry))
    variables = ("a", "c", "d", "b")
    for entry in free:
        if not entry.free_symbols <= {plain[name] for name in variables}:
            raise ArithmeticError(f"elimination left {entry.free_symbols} in {entry}")
    return [MultiPoly.from_expr(entry, variables) for entry in free if entry != 0]


def printed_groebner_inputs(sn: int, sd: int) -> List[MultiPoly]:
    """The four generators of the 12x13 ideal in a, c, d, b as they are usually printed."""
    pa, pc, pd, pb = sympy.symbols("a c d b")
    eps = sn * sd
    polys = [
        pa * pb ** 2 - pa * pd ** 2 - 2 * pb * pd ** 2 + pb ** 2 * pd + 2 * pc * pd ** 2
        + pd ** 3 - 2 * pb * pc * pd + eps * pa * pb - eps * pc * pd,
        pb ** 2 - 2 * pb * pd + eps * pb + pd ** 2 + eps * pd,
        pd - pb + sd * pd ** 3 + pa * pb ** 2 + sd * pb ** 2 * pc - 2 * sd * pb * pd ** 2
        + sd * pb ** 2 * pd + 2 * sd * pc * pd ** 2 + sn * pa * pb - sn * pc * pd
        + sd * pa * pb * pd - 3 * sd * pb * pc * pd,
        pd ** 2 - 2 * sd * pb ** 2 * pd ** 2 - pb * pd + sd * pa * pb ** 3 + sd * pa * pd ** 3
        + sd * pb ** 3 * pd - 2 * sd * pa * pb * pd ** 2 + sd * pb * pc * pd ** 2
        - sd * pb ** 2 * pc * pd + sn * pa * pb ** 2 - sn * pb * pc * pd + sd * pb * pd ** 3,
    ]
    return [MultiPoly.from_expr(p, ("a", "c", "d", "b")) for p in polys]


def _case_12_13(chain: _Chain, case: CaseSpec):
    for sn in SIGNS:
        for sd in SIGNS:
            tag = f"sn={sn}, sd={sd}"
            eps = sn * sd
            system = _levi_matrix(case, sn, sd).subs(s2, 1)
            chain.identity(f"{tag}, b=0: S25 = 4 sd d t2, and a d = -sd makes d != 0 so t2 = 0",
                           _entry(system, "S25").subs(b, 0) - 4 * sd * d * t2)
            chain.identity(f"{tag}: S13 = -sn s1 - b + d, so s1 = sn (d - b)",
                           _entry(system, "S13") - (-sn * s1 - b + d))
            chain.identity(f"{tag}: S12 = sn (s1 + t1) - a + c, so t1 = sn (a - c - d + b)",
                           _entry(system, "S12") - (sn * (s1 + t1) - a + c))
            values = {s1: sn * (d - b), t1: sn * (a - c - d + b)}
            determinant = a * d - b * c
            chain.identity(f"{tag}: S54 = sn (1 + sd det A) = 0",
                           _entry(system, "S54").subs(values) - sn * (1 + sd * determinant))
            chain.identity(f"{tag}: S64 = -sn (1 + sd det A) = 0",
                           _entry(system, "S64").subs(values) + sn * (1 + sd * determinant))
            p = b ** 2 - 2 * b * d + d ** 2 + eps * b + eps * d
            chain.identity(f"{tag}: (S25 - S35) / 4 = -sn (b^2 - 2bd + d^2 + eps b + eps d)",
                           (_entry(system, "S25") - _entry(system, "S35")).subs(values) / 4 + sn * p)
            inputs = eliminated_inputs(case, sn, sd)
            basis = groebner_basis(inputs, "grevlex")
            target = MultiPoly.from_expr(_plain(p), ("a", "c", "d", "b"))
            chain.fact(f"{tag}: b^2 - 2bd + d^2 + eps b + eps d lies in the eliminated ideal",
                       poly_reduce(target, basis, "grevlex").is_zero(), kind="groebner",
                       detail=f"{len(inputs)} eliminated generators, reduced grevlex basis "
                              f"with {len(basis)} generators")
            chain.identity(f"{tag}: the printed quadric generator is the eliminated quadric",
                           printed_groebner_inputs(sn, sd)[1].to_expr() - _plain(p))
            chain.identity(f"{tag}: with m = d - b the quadric reads m^2 + eps (b + d)",
                           p - ((d - b) ** 2 + eps * (b + d)))
            solutions = []
            for step in (-2, -1, 1, 2):
                twice_b, twice_d = -step * (eps * step + 1), step * (1 - eps * step)
                if twice_b % 2 or twice_d % 2 or twice_b == 0:
                    continue
                bb, dd = twice_b // 2, twice_d // 2
                if gcd(bb, dd) == 1 and p.subs({b: bb, d: dd}) == 0:
                    solutions.append((bb, dd))
            chain.fact(f"{tag}: gcd(b, d) = 1 forces m | 2; integral solutions {solutions} all have "
                       f"b odd, but H = Id mod 2 needs b = -h32 even",
                       all(bb % 2 for bb, _ in solutions), kind="congruence")
            chain.identity(f"{tag}: the (3,2) entry of H = G^-1 L G is -b",
                           _h_from_levi(sn, sd)[2, 1] + b)


def _case_13_13(chain: _Chain, case: CaseSpec):
    for sn in SIGNS:
        trivial = _levi_matrix(case, sn, -1).subs({a: sn, d: sn, b: 0, c: 0, s2: s1, t2: t1})
        chain.matrix_identity(f"sn={sn}: L = sn Id with (s1,t1)=(s2,t2) solves the system", trivial)
    for sn in SIGNS:
        for sd in SIGNS:
            tag = f"sn={sn}, sd={sd}"
            eps = sn * sd
            system = _levi_matrix(case, sn, sd).subs(s2, 1)
            x = sn * (d - b)
            chain.identity(f"{tag}: S13 = -sn s1 - b + d, so s1 = X = sn (d - b)",
                           _entry(system, "S13") - (-sn * s1 - b + d))
            chain.identity(f"{tag}: S12 = sn s1 - a + c, so c = a + b - d",
                           _entry(system, "S12") - (sn * s1 - a + c))
            values = {s1: x, c: a + b - d}
            reduced = system.subs(values)
            p5 = (a + b) * (b - d) - sd
            chain.identity(f"{tag}: S54 = -sn sd ((a+b)(b-d) - sd), the determinant condition",
                           _entry(reduced, "S54") + sn * sd * p5)
            chain.identity(f"{tag}: S64 = sn sd ((a+b)(b-d) - sd)",
                           _entry(reduced, "S64") - sn * sd * p5)
            p1 = (a - b) * (d - b) + eps * (a + b)
            p2 = (d - a) * (d - b + eps)
            chain.identity(f"{tag}: (S26 - S25) / 4 = sn P1",
                           (_entry(reduced, "S26") - _entry(reduced, "S25")) / 4 - sn * p1)
            chain.identity(f"{tag}: (S26 - S35) / 4 = -sn P2 with P2 = (d - a)(d - b + eps)",
                           (_entry(reduced, "S26") - _entry(reduced, "S35")) / 4 + sn * p2)
            # a = d
            chain.identity(f"{tag}, a=d: the determinant condition is (a - b)(a + b) = -sd, so "
                           f"a - b = u and a + b = -sd u with u = +-1",
                           p5.subs(d, a) + (a - b) * (a + b) + sd)
            for u in SIGNS:
                v = -sd * u
                av, bv = sympy.Rational(u + v, 2), sympy.Rational(v - u, 2)
                point = {a: av, b: bv, d: av}
                p1_value, s1_value = p1.subs(point), x.subs(point)
                if not av.is_integer or p1_value != 0 or s1_value <= 0:
                    chain.fact(f"{tag}, a=d: (a, b) = ({av}, {bv}) has P1 = {p1_value}, "
                               f"s1 = {s1_value}",
                               not av.is_integer or p1_value != 0 or s1_value <= 0,
                               kind="enumeration")
                    continue
                final = reduced.subs(point)
                chain.fact(f"{tag}, a=d: (a, b) = ({av}, {bv}) gives s1 = 1 = s2",
                           x.subs(point) == 1, kind="identity")
                _forces_equal_parameters(chain, f"{tag}, a=d, (a, b) = ({av}, {bv}): t1 = t2", final)
            # b = d + eps
            chain.identity(f"{tag}, b = d + eps: X = -sd", x.subs(b, d + eps) + sd)
            if sd == 1:
                chain.fact(f"{tag}, b = d + eps: s1 = -1 < 0",
                           sympy.sympify(x.subs(b, d + eps)).is_negative is True, kind="sign")
                continue
            chain.identity(f"{tag}, b = d + eps: P1 = 2 eps b, so b = 0 and d = -eps",
                           p1.subs(b, d + eps) - 2 * eps * (d + eps))
            point = {b: 0, d: -eps}
            determinant_condition = (a * d - b * c + sd).subs(c, a + b - d).subs(point)
            a_value = sympy.solve(determinant_condition, a)
            chain.fact(f"{tag}, b = 0, d = {-eps}: det A = -sd gives a = {a_value}",
                       a_value == [sn], kind="identity")
            point[a] = sn
            chain.fact(f"{tag}, b = 0: c = a + b - d = 0 and s1 = 1",
                       (a + b - d).subs(point) == 0 and x.subs(point) == 1, kind="identity")
            _forces_equal_parameters(chain, f"{tag}, b = 0: t1 = t2", reduced.subs(point))


def _case_45_52(chain: _Chain, case: CaseSpec):
    h11, h22, h33, h26, h46, h51 = sympy.symbols("h11 h22 h33 h26 h46 h51", integer=True)
    chain.assume("A is upper triangular after the Cartan reduction; its diagonal is +-1")
    for signs in [(x, y, z) for x in SIGNS for y in SIGNS for z in SIGNS]:
        values = dict(zip((h11, h22, h33), signs))
        i = sympy.I
        matrix = sympy.Matrix([
            [1 / h11, 4 * i * h22 * h51 * sympy.sqrt(t1) / (h11 * sympy.sqrt(s1)),
             i * sympy.sqrt(2 * t1) * (h11 * h46 + 2 * h22 * h51) / (h11 * sympy.sqrt(s1))],
            [0, h22, sympy.sqrt(2) * (2 * h22 * h33 + h26 * h33 - 2) / (4 * h33)],
            [0, 0, 1 / h33],
        ]).subs(values)
        gram = matrix * matrix.T
        p1 = 8 * (gram[1, 1] - (4 * s2 - 3 * t2) / (8 * t1))
        p2 = gram[2, 2] - s2 / t1
        square = (2 * signs[1] * signs[2] - 2 + signs[2] * h26) ** 2
        tag = f"h11, h22, h33 = {signs}"
        chain.identity(f"{tag}: P1 = (2 h22 h33 - 2 + h33 h26)^2 + 8 - (4 s2 - 3 t2)/t1",
                       p1 - (square + 8 - (4 * s2 - 3 * t2) / t1))
        chain.identity(f"{tag}: P2 = 1 - s2/t1, so s2 = t1", p2 - (1 - s2 / t1))
        chain.identity(f"{tag}: with s2 = t1, P1 = square + (4 t1 + 3 t2)/t1 > 0",
                       p1.subs(s2, t1) - (square + (4 * t1 + 3 * t2) / t1))


def eliminate_and_conclude(case: CaseSpec) -> Verdict:
    chain = _Chain(case.case_id)
    adapted_transform(case, chain)
    handlers: Dict[str, Callable] = {
        "12x12'": _case_12_12, "12x13": _case_12_13, "13x13'": _case_13_13,
        "45x52": _case_45_52,
    }
    if case.case_id not in handlers:
        raise InconclusiveCase(case.case_id, "no elimination script for this case")
    handlers[case.case_id](chain, case)
    return Verdict(case.case_id, case.level, NO_INTERSECTION, chain.steps)


# Integer unit arguments ----------------------------------------------------------------------

def _h_symbols() -> sympy.Matrix:
    return sympy.Matrix(6, 6, lambda i, j: sympy.Symbol(f"h{i + 1}{j + 1}", integer=True))


def _pivot_ratio(g: sympy.Matrix, h: sympy.Matrix, row: int, col: int, zeros=None) -> sympy.Expr:
    """D_row,row read off (G H)_{row,col} = D_row,row G_{row,col}."""
    value = (g[row - 1, :] * h)[0, col - 1] / g[row - 1, col - 1]
    return sympy.expand(value.subs(zeros or {}))


def _single_support_rows(g: sympy.Matrix) -> List[Tuple[int, int]]:
    rows = []
    for row in range(6):
        support = [col for col in range(6) if g[row, col] != 0]
        if len(support) == 1:
            rows.append((row + 1, support[0] + 1))
    return rows


def _zeros_from_rows(h: sympy.Matrix, rows) -> Dict[sympy.Symbol, int]:
    """A row of G with one nonzero entry in column k forces h_kj = 0 for j != k."""
    zeros = {}
    for _, col in rows:
        for j in range(1, 7):
            if j != col:
                zeros[h[col - 1, j - 1]] = 0
    return zeros


def _unit_square(chain: _Chain, tag: str):
    x, y, xp, yp = sympy.symbols("x y xp yp", integer=True)
    rational, irrational = _split_sqrt2((x + sympy.sqrt(2) * y) ** 2)
    chain.identity(f"{tag}: (x + y sqrt2)^2 has sqrt2-part 2xy, so x y = 0", irrational - 2 * x * y)
    rational, _ = _split_sqrt2(sympy.sqrt(2) * y * (xp + sympy.sqrt(2) * yp))
    chain.fact(f"{tag}: x = 0 needs 2 y yp = 1, impossible over Z",
               _vanishes(rational - 2 * y * yp) and _no_integer_solution(2 * y * yp - 1))
    rational, irrational = _split_sqrt2(x * (xp + sympy.sqrt(2) * yp))
    chain.fact(f"{tag}: y = 0 needs x xp = 1, so x = +-1",
               _vanishes(rational - x * xp) and _vanishes(irrational - x * yp))


def _diagonal_levi() -> Tuple[Tuple[sympy.Symbol, ...], sympy.Matrix]:
    units = sympy.symbols("u1 u2 u3", nonzero=True)
    return units, sympy.diag(*units, *[1 / unit for unit in units])


def _integral_units(chain: _Chain, claim: str):
    """x y = 1 over Z only at x = y = +-1."""
    x, y = sympy.symbols("x y", integer=True)
    pairs = sympy.diophantine(x * y - 1)
    chain.fact(f"{claim}: x y = 1 over Z has the solutions {sorted(pairs)}",
               bool(pairs) and all(p ** 2 == 1 and q ** 2 == 1 for p, q in pairs), kind="integer")


def _ratio_residual(cone: str, levi: sympy.Matrix) -> sympy.Matrix:
    """Ad(D) N_st minus the ratio form that Ad(G) N(s2, t2) takes."""
    if cone == "52":
        ratios = ((4 * s2 + t2) / (4 * s1 + t1), t2 / t1)
    else:
        ratios = (s2 / s1, t2 / t1)
    return adjoint(levi, N_ST_II1) - _ratio_form(cone, *ratios)


def _case_52_52(chain: _Chain, case: CaseSpec):
    g = g_ii1_52(s1, t1)
    h = _h_symbols()
    chain.assume("GHG^-1 is the diagonal Levi element diag(A, A^-1) after the Cartan reduction")
    units, levi = _diagonal_levi()
    chain.matrix_identity("Ad(diag(A, A^-1)) N_st has upper block A^2",
                          adjoint(levi, N_ST_II1) - _sparse({(1, 4): units[0] ** 2,
                                                             (2, 5): units[1] ** 2,
                                                             (3, 6): units[2] ** 2}))
    rows = _single_support_rows(g)
    chain.fact("row 1 of G has a single nonzero entry, so D11 = h11 and h1j = 0 for j != 1",
               rows == [(1, 1)] and _vanishes(_pivot_ratio(g, h, 1, 1) - h[0, 0]), kind="identity")
    chain.identity("D44 = h33 + 2 h43 - 2 h53", _pivot_ratio(g, h, 4, 3) - (h[2, 2] + 2 * h[3, 2] - 2 * h[4, 2]))
    chain.identity("the Levi element gives D11 D44 = 1", levi[0, 0] * levi[3, 3] - 1)
    _integral_units(chain, "D11 = h11 and D44 are integral")
    residual = _ratio_residual("52", levi)
    for sign in SIGNS:
        chain.identity(f"D11 = {sign}: the (1,4) entry of Ad(D) N_st - Ad(G) N(s2,t2) is "
                       f"(t1 - t2)/t1, so t2 = t1",
                       residual[0, 3].subs(units[0], sign) - (t1 - t2) / t1)
    chain.identity("D22 = (h22 - 2 h62) + sqrt2 (h12 + 2 h62)",
                   _pivot_ratio(g, h, 2, 2)
                   - ((h[1, 1] - 2 * h[5, 1]) + sympy.sqrt(2) * (h[0, 1] + 2 * h[5, 1])))
    chain.identity("D55 = (h33 - 2 h53) - 2 sqrt2 h53",
                   _pivot_ratio(g, h, 5, 3) - ((h[2, 2] - 2 * h[4, 2]) - 2 * sympy.sqrt(2) * h[4, 2]))
    _unit_square(chain, "D22 D55 = 1 in Z[sqrt2] with D22^2 = (4 s2 + t2)/(4 s1 + t1)")
    chain.identity("D22^2 = 1 and t1 = t2 give 4 s2 + t1 = 4 s1 + t1, so s1 = s2",
                   (4 * s2 + t1) - (4 * s1 + t1) - 4 * (s2 - s1))


def _case_45_45(chain: _Chain, case: CaseSpec):
    g = g_ii1_45(s1, t1)
    h = _h_symbols()
    chain.assume("GHG^-1 is the diagonal Levi element diag(A, A^-1) after the Cartan reduction")
    rows = _single_support_rows(g)
    zeros = _zeros_from_rows(h, rows)
    chain.fact("rows 1, 3, 5 of G have single nonzero entries in columns 4, 6, 5",
               rows == [(1, 4), (3, 6), (5, 5)], kind="identity")
    claims = ((1, 4, h[3, 3]), (2, 2, h[1, 1]), (3, 6, h[5, 5]),
              (4, 1, h[0, 0]), (5, 5, h[4, 4]), (6, 3, h[2, 2]))
    for row, col, expected in claims:
        chain.identity(f"D{row}{row} = {expected}", _pivot_ratio(g, h, row, col, zeros) - expected)
    units, levi = _diagonal_levi()
    for k in range(3):
        chain.identity(f"the Levi element gives D{k + 1}{k + 1} D{k + 4}{k + 4} = 1",
                       levi[k, k] * levi[k + 3, k + 3] - 1)
    _integral_units(chain, "h44 h11 = h22 h55 = h66 h33 = 1")
    residual = _ratio_residual("45", levi)
    differences = _sparse({(1, 4): (s1 - s2) / s1, (2, 5): (t1 - t2) / t1, (3, 6): (t1 - t2) / t1})
    for signs in [(p, q, r) for p in SIGNS for q in SIGNS for r in SIGNS]:
        at_signs = residual.subs(dict(zip(units, signs)))
        chain.matrix_identity(f"D11, D22, D33 = {signs}: Ad(D) N_st - Ad(G) N(s2,t2) has entries "
                              f"(s1 - s2)/s1 and (t1 - t2)/t1, so s2 = s1 and t2 = t1",
                              at_signs - differences)


def _case_i2(chain: _Chain, case: CaseSpec):
    for cone in G_I2:
        adapted_transform(CaseSpec(case.case_id, cone, cone, "I2", 1, "units"), chain)
    a11, a12, a21, a22, e = sympy.symbols("a11 a12 a21 a22 e", integer=True)
    block = sympy.Matrix([[a11, a12], [a21, a22]])
    det = block.det()
    levi = sympy.diag(block, e, block.inv().T, e)
    levi_inverse = sympy.diag(block.inv(), e, block.T, e)
    chain.assume("the frame change preserving span(E14, E25) is a Levi element diag(A, e, A^-T, e)")
    chain.matrix_identity("diag(A, e, A^-T, e) is inverted by diag(A^-1, e, A^T, e) when e^2 = 1",
                          (levi * levi_inverse - sympy.eye(6)).subs(e ** 2, 1))
    image = (levi * standard_i2(s1, t1) * levi_inverse)[0:2, 3:5]
    chain.matrix_identity("Ad(L)(s1 E14 + t1 E25) has block A diag(s1, t1) A^T",
                          image - block * sympy.diag(s1, t1) * block.T)
    p, q = a11 * a21, a12 * a22
    chain.identity("the off-diagonal entry is P s1 + Q t1 with P = a11 a21, Q = a12 a22",
                   image[0, 1] - (p * s1 + q * t1))
    chain.identity("det(A)^2 = a11^2 a22^2 + a12^2 a21^2 - 2PQ", det ** 2 - (a11 ** 2 * a22 ** 2 + a12 ** 2 * a21 ** 2 - 2 * p * q))
    big_p, big_q = sympy.symbols("P Q", integer=True, nonzero=True)
    chain.identity("P s1 + Q t1 = 0 gives Q = -P s1 / t1",
                   (big_p * s1 + big_q * t1).subs(big_q, -big_p * s1 / t1))
    chain.fact("with s1, t1 > 0 and P, Q nonzero the product PQ = -P^2 s1 / t1 is negative",
               (big_p * (-big_p * s1 / t1)).is_negative is True, kind="sign")
    m = sympy.Symbol("m", integer=True, nonnegative=True)
    chain.identity("det(A)^2 - 2 = (a11 a22)^2 + (a12 a21)^2 - 2(PQ + 1)",
                   det ** 2 - 2 - ((a11 * a22) ** 2 + (a12 * a21) ** 2 - 2 * (p * q + 1)))
    bound = (a11 * a22) ** 2 + (a12 * a21) ** 2 - 2 * ((-1 - m) + 1)
    chain.fact("an integral PQ < 0 is -1 - m with m >= 0, and then det(A)^2 - 2 >= 0",
               sympy.expand(bound).is_nonnegative is True, kind="sign")
    chain.fact("det(A) = +-1 for an integral Levi block contradicts det(A)^2 >= 2",
               all(unit ** 2 < 2 for unit in SIGNS), kind="integer")
    excluded = [{a11: 0, a12: 0}, {a21: 0, a22: 0}]
    chain.fact("P = Q = 0 with a11 = a12 = 0 or a21 = a22 = 0 makes A singular",
               all(det.subs(choice) == 0 for choice in excluded), kind="identity")
    diagonal = block.subs({a12: 0, a21: 0})
    chain.matrix_identity("diagonal A: A diag(s1,t1) A^T = diag(a11^2 s1, a22^2 t1), and a11 a22 = +-1 "
                          "forces (s2, t2) = (s1, t1)",
                          diagonal * sympy.diag(s1, t1) * diagonal.T
                          - sympy.diag(a11 ** 2 * s1, a22 ** 2 * t1))
    swap = block.subs({a11: 0, a22: 0})
    chain.matrix_identity("antidiagonal A: A diag(s1,t1) A^T = diag(a12^2 t1, a21^2 s1), so "
                          "(s2, t2) = (t1, s1) on the same cone",
                          swap * sympy.diag(s1, t1) * swap.T
                          - sympy.diag(a12 ** 2 * t1, a21 ** 2 * s1))


def integer_diagonal_cases(case: CaseSpec) -> Verdict:
    chain = _Chain(case.case_id)
    if case.lmhs_type == "I2":
        _case_i2(chain, case)
    elif case.case_id == "52x52'":
        adapted_transform(case, chain)
        _case_52_52(chain, case)
    elif case.case_id == "45x45'":
        adapted_transform(case, chain)
        _case_45_45(chain, case)
    else:
        raise InconclusiveCase(case.case_id, "no unit argument for this case")
    return Verdict(case.case_id, case.level, NO_INTERSECTION, chain.steps)


def check_case(case: CaseSpec) -> Verdict:
    if case.method == "units":
        verdict = integer_diagonal_cases(case)
    else:
        verdict = eliminate_and_conclude(case)
    logger.info(f"Fan case {case.case_id} (level {case.level}): {verdict.result}, "
                f"{len(verdict.evidence)} checked steps")
    return verdict


def full_report(cones: Optional[Iterable[str]] = None,
                progress_callback: Optional[Callable[[str, int, int], None]] = None,
                should_continue: Optional[Callable[[], bool]] = None) -> List[Verdict]:
    available = set(CONE_GENERATORS if cones is None else cones)
    cases = [case for case in CASES if case.left in available and case.right in available]
    verdicts = []
    for index, case in enumerate(cases):
        if should_continue is not None and not should_continue():
            logger.info("Fan check cancelled")
            break
        try:
            verdicts.append(check_case(case))
        except InconclusiveCase as e:
            logger.error(f"Fan case {case.case_id} is inconclusive: {e}")
            verdicts.append(Verdict(case.case_id, case.level, INCONCLUSIVE,
                                    [EvidenceStep(str(e), "failure")]))
        if progress_callback is not None:
            progress_callback("fan", index + 1, len(cases))
    return verdicts


# Randomized orbit search ---------------------------------------------------------------------

HIT_TOLERANCE = 1e-9
BATCH_SIZE = 4096


def _scaled_generators(cone: str) -> Tuple[np.ndarray, np.ndarray]:
    """Generators of the cone scaled by 3 to integer matrices."""
    left, right = CONE_GENERATORS[cone]
    return tuple(np.array((3 * sympy.Matrix(NILPOTENT_LOGS[label])).tolist(), dtype=np.int64)
                 for label in (left, right))


def _open_cones_meet(r1, r2) -> bool:
    """Whether the open cone spanned by r1, r2 meets the open positive quadrant."""
    lower, upper = sympy.Integer(0), None
    for p, q in zip(r1, r2):
        # lambda p + q > 0 for lambda > 0
        if p > 0:
            lower = max(lower, -q / p)
        elif p < 0:
            upper = -q / p if upper is None else min(upper, -q / p)
        elif q <= 0:
            return False
    return upper is None or lower < upper


def classify_hit(h: np.ndarray, h_inv: np.ndarray, cone_a: str, cone_b: str) -> Optional[str]:
    """
    Exact comparison of Ad(H) sigma_a with sigma_b: None when their interiors are disjoint,
    "cone_coincidence" when the cones are equal, "interior_nontrivial" otherwise.
    """
    hs, his = sympy.Matrix(h.tolist()), sympy.Matrix(h_inv.tolist())
    ni, nj = (sympy.Matrix(m.tolist()) for m in _scaled_generators(cone_a))
    mi, mj = (sympy.Matrix(m.tolist()) for m in _scaled_generators(cone_b))
    edges = [(hs * ni * his).reshape(36, 1), (hs * nj * his).reshape(36, 1)]
    targets = sympy.Matrix.hstack(mi.reshape(36, 1), mj.reshape(36, 1))
    null = sympy.Matrix.hstack(*edges, -targets).nullspace()
    if not null:
        return None
    if len(null) == 1:
        vector = list(null[0])
        if all(x > 0 for x in vector) or all(x < 0 for x in vector):
            return "interior_nontrivial"
        return None
    rays = []
    for edge in edges:
        try:
            solution, params = targets.gauss_jordan_solve(edge)
        except ValueError:
            return "interior_nontrivial"
        if params.shape[0]:
            return "interior_nontrivial"
        rays.append((solution[0], solution[1]))
    (x1, y1), (x2, y2) = rays
    if (x1 > 0 and y1 == 0 and x2 == 0 and y2 > 0) or (x1 == 0 and y1 > 0 and x2 > 0 and y2 == 0):
        return "cone_coincidence"
    return "interior_nontrivial" if _open_cones_meet(*rays) else None


@dataclass
class SearchResult:
    left: str
    right: str
    level: int
    word_length: int
    trials: int
    flagged: int = 0
    coincidences: int = 0
    counterexamples: List[dict] = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "pair": f"{self.left}x{self.right}",
            "level": self.level,
            "word_length": self.word_length,
            "trials": self.trials,
            "flagged": self.flagged,
            "coincidences": self.coincidences,
            "counterexamples": self.counterexamples,
        }


def randomized_orbit_search(pair: Tuple[str, str], level: int = 12, word_length: int = 5,
                            trials: int = 10 ** 5, seed: int = 0,
                            should_continue: Optional[Callable[[], bool]] = None) -> SearchResult:
    """Sample H in the level-n congruence subgroup and look for common interior points."""
    if word_length > 8 or trials > 10 ** 6:
        raise ValueError("orbit search supports word length <= 8 and at most 10^6 trials")
    cone_a, cone_b = pair
    rng = np.random.default_rng(seed)
    ni, nj = (m.astype(float) for m in _scaled_generators(cone_a))
    targets = np.stack([-m.astype(float).reshape(36) for m in _scaled_generators(cone_b)], axis=1)
    result = SearchResult(cone_a, cone_b, level, word_length, 0)
    while result.trials < trials:
        if should_continue is not None and not should_continue():
            break
        count = min(BATCH_SIZE, trials - result.trials)
        words, inverses = random_words(level, word_length, count, rng)
        hf, hif = words.astype(float), inverses.astype(float)
        ad_i = (hf @ ni @ hif).reshape(count, 36)
        ad_j = (hf @ nj @ hif).reshape(count, 36)
        systems = np.concatenate([ad_i[:, :, None], ad_j[:, :, None],
                                  np.broadcast_to(targets, (count, 36, 2))], axis=2)
        singular = np.linalg.svd(systems, compute_uv=False)
        ratio = singular[:, -1] / np.maximum(singular[:, 0], 1e-300)
        for index in np.nonzero(ratio < HIT_TOLERANCE)[0]:
            result.flagged += 1
            kind = classify_hit(words[index], inverses[index], cone_a, cone_b)
            if kind == "cone_coincidence":
                result.coincidences += 1
            elif kind == "interior_nontrivial":
                result.counterexamples.append({"H": words[index].tolist()})
                logger.warning(f"Interior hit for {cone_a}x{cone_b}: H = {words[index].tolist()}")
        result.trials += count
    logger.info(f"Orbit search {cone_a}x{cone_b}: {result.trials} trials, {result.flagged} flagged, "
                f"{len(result.counterexamples)} interior hits")
    return result


def search_all(level: int = 12, word_length: int = 5, trials: int = 10 ** 5, seed: int = 0,
               pairings: Sequence[Tuple[str, str]] = SEARCH_PAIRINGS,
               should_continue: Optional[Callable[[], bool]] = None) -> List[SearchResult]:
    return [randomized_orbit_search(pair, level, word_length, trials, seed + index,
                                    should_continue)
            for index, pair in enumerate(pairings)]
