import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from octic_monodromy.errors import Ambiguous, NonCommuting, NotUnipotent
from octic_monodromy.lmhs import (
    ClassifyContext,
    build_cones,
    classify,
    exp_nilpotent,
    hodge_diamond,
    jordan_partition,
    log_unipotent,
    quasi_unipotent_indices,
    weight_filtration,
)
from octic_monodromy.reference import (
    CONE_GENERATORS,
    CONE_TYPES,
    FIRST_LIST,
    GENERATOR_LABELS,
    NILPOTENT_LOGS,
    SECOND_LIST,
)
from octic_monodromy.symplectic import adjoint, level_generators


def test_logarithms_of_second_list():
    for name, label in GENERATOR_LABELS.items():
        n = log_unipotent(SECOND_LIST[label])
        assert n == NILPOTENT_LOGS[name]
        assert exp_nilpotent(n) == SECOND_LIST[label]


def test_log_rejects_unipotents_beyond_weight_three():
    shift = sympy.Matrix(6, 6, lambda i, j: 1 if j == i + 1 else 0)
    with pytest.raises(NotUnipotent, match="nilpotency order 6"):
        log_unipotent(sympy.eye(6) + shift)
    with pytest.raises(NotUnipotent, match="not unipotent"):
        log_unipotent(2 * sympy.eye(6))
    assert log_unipotent(sympy.eye(6) + shift ** 3) == shift ** 3


def test_jordan_partitions():
    logs = NILPOTENT_LOGS
    assert jordan_partition(logs["N1"]) == (4, 2)
    assert jordan_partition(logs["N2"]) == (2, 2, 2)
    assert jordan_partition(logs["N1"] + logs["N2"]) == (4, 2)
    for name in ("N3", "N4", "N6", "N7"):
        assert jordan_partition(logs[name]) == (2, 1, 1, 1, 1)
    assert jordan_partition(logs["N5"]) == (2, 2, 1, 1)
    with pytest.raises(NotUnipotent):
        jordan_partition(sympy.eye(6))


def test_weight_filtration_of_type_iv2():
    filtration = weight_filtration(NILPOTENT_LOGS["N1"])
    assert filtration.dims() == (1, 1, 3, 3, 5, 5, 6)
    assert filtration.graded_dims() == {0: 1, 1: 0, 2: 2, 3: 0, 4: 2, 5: 0, 6: 1}


def test_classify_needs_context_for_ambiguous_partition():
    n5 = NILPOTENT_LOGS["N5"]
    with pytest.raises(Ambiguous):
        classify(n5)
    assert classify(n5, ClassifyContext(above=("II1",))) == "II0"
    assert classify(NILPOTENT_LOGS["N1"]) == "IV2"


def test_cone_types_match_printed_triples():
    cones = build_cones(NILPOTENT_LOGS, CONE_GENERATORS)
    assert {name: cone.types for name, cone in cones.items()} == CONE_TYPES
    assert cones["12"].label() == "<IV2|IV2|II1>"


def test_non_commuting_generators_are_rejected():
    a = sympy.zeros(6, 6)
    a[0, 1] = 1
    b = sympy.zeros(6, 6)
    b[1, 2] = 1
    with pytest.raises(NonCommuting):
        build_cones({"A": a, "B": b}, {"x": ("A", "B")})


def test_quasi_unipotent_indices():
    assert quasi_unipotent_indices(FIRST_LIST["T_m1"]) == (1, 4)
    assert quasi_unipotent_indices(-sympy.eye(6)) == (2, 1)


def test_hodge_diamond_rendering():
    lines = hodge_diamond("IV2").splitlines()
    assert len(lines) == 7
    assert lines[0].strip() == "1"
    assert lines[2].split() == ["0", "2", "0"]
    assert lines[-1].strip() == "1"


@settings(max_examples=15, deadline=None)
@given(st.lists(st.integers(min_value=0, max_value=35), min_size=1, max_size=3),
       st.sampled_from(sorted(NILPOTENT_LOGS)))
def test_partition_is_invariant_under_congruence_subgroup(picks, name):
    generators = level_generators(2)
    g = sympy.eye(6)
    for index in picks:
        g = g * sympy.Matrix(generators[index].tolist())
    n = NILPOTENT_LOGS[name]
    assert jordan_partition(adjoint(g, n)) == jordan_partition(n)
