import numpy as np
import pytest
import sympy

from octic_monodromy.fanchecker import (
    CASES,
    INCONCLUSIVE,
    NO_INTERSECTION,
    SEARCH_PAIRINGS,
    SYSTEM_VARIABLES,
    a,
    adapted_transform,
    b,
    c,
    check_case,
    classify_hit,
    commutation_system,
    cone_operator,
    d,
    eliminate_and_conclude,
    eliminated_inputs,
    full_report,
    get_case,
    integer_diagonal_cases,
    levi_template,
    randomized_orbit_search,
    search_all,
    solution_family_12,
)
from octic_monodromy import fanchecker
from octic_monodromy.errors import InconclusiveCase
from octic_monodromy.scalarfield import MultiPoly, groebner_basis, poly_reduce
from octic_monodromy.symplectic import adjoint, is_symplectic


def test_case_table():
    assert len(CASES) == 9
    assert len(SEARCH_PAIRINGS) == 12
    assert {case.case_id: case.level for case in CASES if case.level > 1} == {
        "12x12'": 3, "12x13": 2,
    }
    with pytest.raises(KeyError):
        get_case("12x67")


@pytest.mark.parametrize("case", CASES, ids=[case.case_id for case in CASES])
def test_every_case_has_no_interior_intersection(case):
    verdict = check_case(case)
    assert verdict.result == NO_INTERSECTION
    assert verdict.evidence
    assert verdict.to_dict()["case_id"] == case.case_id


def test_level_three_case_ends_in_residue_mod_3():
    verdict = check_case(get_case("12x12'"))
    steps = [step for step in verdict.evidence if step.kind == "congruence"]
    assert steps and all("mod 3" in step.claim for step in steps)


def test_level_two_case_uses_groebner_and_parity():
    verdict = check_case(get_case("12x13"))
    kinds = {step.kind for step in verdict.evidence}
    assert "groebner" in kinds
    assert any("mod 2" in step.claim for step in verdict.evidence if step.kind == "congruence")


def test_eliminated_ideal_contains_quadric():
    x_a, x_c, x_d, x_b = sympy.symbols("a c d b")
    basis = groebner_basis(eliminated_inputs(get_case("12x13"), 1, 1), "grevlex")
    quadric = MultiPoly.from_expr(x_b ** 2 - 2 * x_b * x_d + x_b + x_d ** 2 + x_d,
                                  ("a", "c", "d", "b"))
    assert poly_reduce(quadric, basis, "grevlex").is_zero()


def test_levi_template_is_symplectic_on_its_locus():
    for sn in (1, -1):
        for sd in (1, -1):
            levi = levi_template(sn, sd).subs({a: 1, b: 0, c: 0, d: -sd})
            assert is_symplectic(levi)


def test_solution_family_12():
    family = solution_family_12(bound=20)
    assert family
    for point in family:
        assert point["a"] ** 2 + point["b"] * point["c"] - 1 == 0
        assert point["d"] == -point["a"]
        assert point["b"] % 3 != 0


def test_full_report_restricted_to_cones():
    verdicts = full_report(cones=["34", "63", "67"])
    assert [v.case_id for v in verdicts] == ["34x34'", "63x63'", "67x67'"]
    assert all(v.result == NO_INTERSECTION for v in verdicts)
    assert INCONCLUSIVE not in {v.result for v in verdicts}


def test_full_report_honours_cancellation():
    progress = []
    verdicts = full_report(progress_callback=lambda *args: progress.append(args),
                           should_continue=lambda: len(progress) < 1)
    assert len(verdicts) == 1
    assert progress == [("fan", 1, len(CASES))]


def test_classify_hit_on_identity():
    eye = np.eye(6, dtype=np.int64)
    assert classify_hit(eye, eye, "12", "12") == "cone_coincidence"
    assert classify_hit(eye, eye, "12", "13") is None


def test_small_orbit_search_finds_no_counterexample():
    result = randomized_orbit_search(("12", "13"), level=12, word_length=3, trials=200, seed=0)
    assert result.trials == 200
    assert result.counterexamples == []
    assert result.to_dict()["pair"] == "12x13"
    with pytest.raises(ValueError):
        randomized_orbit_search(("12", "12"), word_length=9, trials=10)


@pytest.mark.slow
def test_full_orbit_search():
    for result in search_all(level=12, word_length=5, trials=10 ** 5, seed=0):
        assert result.counterexamples == []


def test_adapted_transforms_are_symplectic():
    for case_id in ("12x13", "45x52", "34x34'", "63x63'", "67x67'"):
        g = adapted_transform(get_case(case_id))
        assert is_symplectic(g)


def test_i2_transforms_reach_the_span_of_e14_and_e25():
    s, t = sympy.symbols("s t", positive=True)
    for cone in ("34", "63", "67"):
        g = adapted_transform(get_case(f"{cone}x{cone}'"))
        image = adjoint(g, cone_operator(cone, s, t)).applyfunc(sympy.expand)
        outside = [image[i, j] for i in range(6) for j in range(6) if (i, j) not in ((0, 3), (1, 4))]
        assert all(entry == 0 for entry in outside)
        assert image[0, 3] != 0 and image[1, 4] != 0


def test_commutation_system_admits_the_trivial_solution():
    system = commutation_system(get_case("12x12'"), 1, -1)
    assert system
    assert all(poly.variables == SYSTEM_VARIABLES for poly in system)
    x = {name: sympy.Symbol(name) for name in SYSTEM_VARIABLES}
    trivial = {x["a"]: 1, x["d"]: 1, x["b"]: 0, x["c"]: 0, x["s2"]: x["s1"], x["t2"]: x["t1"]}
    assert all(sympy.expand(poly.to_expr().subs(trivial)) == 0 for poly in system)


def test_each_method_rejects_cases_it_has_no_argument_for():
    with pytest.raises(InconclusiveCase):
        eliminate_and_conclude(get_case("34x34'"))
    with pytest.raises(InconclusiveCase):
        integer_diagonal_cases(get_case("12x13"))
    assert eliminate_and_conclude(get_case("13x13'")).result == NO_INTERSECTION
    assert integer_diagonal_cases(get_case("63x63'")).result == NO_INTERSECTION


def test_eliminated_inputs_only_involve_the_levi_entries():
    for sn in (1, -1):
        for sd in (1, -1):
            inputs = eliminated_inputs(get_case("12x13"), sn, sd)
            assert inputs
            assert all(poly.variables == ("a", "c", "d", "b") for poly in inputs)


def test_changed_printed_coefficient_is_inconclusive(monkeypatch):
    x_d = sympy.Symbol("d")
    original = fanchecker.printed_groebner_inputs

    def misprinted(sn, sd):
        polys = original(sn, sd)
        quadric = polys[1].to_expr() + x_d
        polys[1] = MultiPoly.from_expr(quadric, ("a", "c", "d", "b"))
        return polys

    monkeypatch.setattr(fanchecker, "printed_groebner_inputs", misprinted)
    with pytest.raises(InconclusiveCase, match="printed quadric"):
        check_case(get_case("12x13"))


def test_ideal_without_the_quadric_is_inconclusive(monkeypatch):
    x_d, x_b = sympy.symbols("d b")
    shifted = x_b ** 2 - 2 * x_b * x_d + x_d ** 2 + x_b + x_d + 1
    monkeypatch.setattr(fanchecker, "eliminated_inputs",
                        lambda case, sn, sd: [MultiPoly.from_expr(shifted, ("a", "c", "d", "b"))])
    with pytest.raises(InconclusiveCase, match="eliminated ideal"):
        check_case(get_case("12x13"))


@pytest.mark.parametrize("case_id", ["52x52'", "45x45'"])
def test_unit_cases_depend_on_the_integer_solutions(monkeypatch, case_id):
    monkeypatch.setattr(fanchecker.sympy, "diophantine", lambda expr: {(2, 2)})
    with pytest.raises(InconclusiveCase, match="x y = 1"):
        check_case(get_case(case_id))


@pytest.mark.parametrize("case_id", ["52x52'", "45x45'"])
def test_unit_cases_depend_on_the_ratio_form(monkeypatch, case_id):
    original = fanchecker._ratio_residual

    def shifted(cone, levi):
        return original(cone, levi) + sympy.Matrix(6, 6, lambda i, j: 1 if (i, j) == (0, 3) else 0)

    monkeypatch.setattr(fanchecker, "_ratio_residual", shifted)
    with pytest.raises(InconclusiveCase):
        check_case(get_case(case_id))


def test_i2_case_depends_on_the_unit_determinants(monkeypatch):
    monkeypatch.setattr(fanchecker, "SIGNS", (1, -1, 2))
    with pytest.raises(InconclusiveCase, match="det"):
        check_case(get_case("34x34'"))


@pytest.mark.parametrize("case", CASES, ids=[case.case_id for case in CASES])
def test_evidence_is_checked_not_asserted(case):
    kinds = {step.kind for step in check_case(case).evidence}
    assert kinds - {"assumption"}
    assert kinds <= {"assumption", "identity", "numeric", "sign", "integer", "congruence",
                     "enumeration", "groebner"}
