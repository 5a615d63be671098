import numpy as np
import pytest
import sympy

from octic_monodromy.errors import PoleAtPoint
from octic_monodromy.frobenius import log_solution_basis, power_series_as_log_series, w0_series
from octic_monodromy.gaussmanin import (
    D_PF1,
    D_PF2,
    DIVISORS,
    PICARD_FUCHS,
    connection_matrices,
    eval_connection,
    flatness_residual,
    get_chart,
    local_monodromy_from_residue,
    pf_annihilates,
    pole_factors,
    residue_matrix,
    z1,
)
from octic_monodromy.reference import S_M1, S_M2


def test_residue_monodromies_match_printed_mum_matrices():
    assert local_monodromy_from_residue("z1") == S_M1
    assert local_monodromy_from_residue("z2") == S_M2


def test_residues_are_nilpotent():
    for divisor in ("z1", "z2"):
        assert (residue_matrix(divisor) ** 6).is_zero_matrix
    with pytest.raises(ValueError):
        residue_matrix("alpha")


@pytest.mark.slow
def test_connection_is_flat():
    assert flatness_residual().is_zero_matrix


def test_divisor_table():
    assert len(DIVISORS.names()) == 11
    assert DIVISORS.by_name("C_con").number == 6
    assert DIVISORS.by_name("E0").exceptional
    with pytest.raises(KeyError):
        DIVISORS.by_name("C2")


def test_pole_factors_of_mum_chart():
    assert [label for label, _ in pole_factors("z")] == ["z1", "z2", "z1-1", "z2-1", "alpha"]


def test_eval_connection_rejects_poles():
    with pytest.raises(PoleAtPoint):
        eval_connection("z", (0, 0.5))
    with pytest.raises(PoleAtPoint):
        eval_connection(get_chart("z"), (0.5, 1))
    a_u, a_v = eval_connection("z", (0.3, 0.2))
    assert a_u.shape == a_v.shape == (6, 6)
    assert np.all(np.isfinite(a_u)) and np.all(np.isfinite(a_v))


def test_double_cover_chart_round_trip():
    chart = get_chart("zpp")
    u, v = chart.from_z((0.1, 100))
    assert u == pytest.approx(1.0)
    assert v == pytest.approx(0.1)
    z1, z2 = chart.z_point((u, v))
    assert z1 == pytest.approx(0.1)
    assert z2 == pytest.approx(100)
    assert chart.z_point((-u, -v)) == pytest.approx((z1, z2))
    with pytest.raises(KeyError):
        get_chart("w")


def test_holomorphic_period_solves_picard_fuchs():
    series = w0_series(6)
    for op in PICARD_FUCHS:
        assert pf_annihilates(op, series)


def test_first_log_solutions_solve_picard_fuchs():
    for solution in log_solution_basis(5)[:3]:
        assert pf_annihilates(D_PF1, solution)
        assert pf_annihilates(D_PF2, solution)


def test_non_solution_is_detected():
    series = power_series_as_log_series({(0, 0): 1, (1, 0): 1}, order=4)
    assert not pf_annihilates(D_PF2, series)
    with pytest.raises(ValueError):
        pf_annihilates(D_PF1, {(0, 0): 1})


def test_connection_matrices_carry_the_displayed_entries():
    m1, m2 = connection_matrices()
    assert sympy.simplify(m1[1, 0] - sympy.I / (2 * sympy.pi * z1)) == 0
    assert m2[0, 0] == 0
    assert m1.shape == m2.shape == (6, 6)
