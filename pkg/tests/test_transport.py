import numpy as np
import pytest
import sympy

from octic_monodromy.errors import ConvergenceFailure, PoleOnPath
from octic_monodromy.loops import PathSegment, get_loop
from octic_monodromy.reference import S_M1, S_M2
from octic_monodromy.report import encode_matrix
from octic_monodromy.transport import (
    MonodromyEstimate,
    compose,
    determinant_residual,
    form_residual,
    monodromy,
    transport,
    transport_segment,
    working_dtype,
)


def _complex(matrix) -> np.ndarray:
    return np.array(sympy.N(matrix).tolist(), dtype=complex)


def test_mum_loops_reproduce_residue_monodromies():
    for label, expected in (("l1", S_M1), ("l2", S_M2)):
        estimate = monodromy(get_loop(label), steps=4000)
        assert np.max(np.abs(estimate.matrix - _complex(expected))) < 1e-2
        assert estimate.error_bound > 0
        assert determinant_residual(estimate) < 1e-2


@pytest.mark.slow
def test_mum_loops_at_full_resolution():
    for label, expected in (("l1", S_M1), ("l2", S_M2)):
        estimate = monodromy(get_loop(label), steps=10 ** 6)
        assert np.max(np.abs(estimate.matrix - _complex(expected))) < 1e-3
        assert form_residual(estimate, get_loop(label).base) < 1e-3


def test_rk4_agrees_with_euler():
    euler = monodromy(get_loop("l1"), steps=4000)
    rk4 = monodromy(get_loop("l1"), steps=1000, method="rk4")
    assert np.max(np.abs(euler.matrix - rk4.matrix)) < 1e-2
    assert rk4.method == "rk4"


def test_max_error_raises_convergence_failure():
    with pytest.raises(ConvergenceFailure):
        monodromy(get_loop("l1"), steps=1000, max_error=1e-30)


def test_path_through_pole_is_rejected():
    segment = PathSegment.line("z", (-0.5, 0.5), (0.5, 0.5))
    with pytest.raises(PoleOnPath) as info:
        transport_segment(segment, 1000, index=3)
    assert info.value.segment_index == 3


def test_transport_argument_checks():
    segment = PathSegment.line("z", (0.1, 0.1), (0.2, 0.1))
    with pytest.raises(ValueError):
        transport_segment(segment, 0)
    with pytest.raises(ValueError):
        transport_segment(segment, 100, method="leapfrog")
    still = PathSegment.line("z", (0.1, 0.1), (0.1, 0.1))
    assert np.array_equal(transport_segment(still, 100), np.eye(6))


def test_there_and_back_is_identity():
    out = PathSegment.line("z", (0.1, 0.1), (0.2, 0.15))
    frame = transport([out, out.reversed()], steps_per_segment=4000)
    assert np.max(np.abs(frame - np.eye(6))) < 1e-2


def test_compose_and_power():
    estimate = MonodromyEstimate("a", np.diag([1, 2, 1, 1, 0.5, 1]), 10, 1e-6)
    squared = estimate.power(2)
    assert np.allclose(squared.matrix, np.diag([1, 4, 1, 1, 0.25, 1]))
    assert squared.error_bound > estimate.error_bound
    identity = MonodromyEstimate.identity()
    assert np.allclose(compose(identity, estimate).matrix, estimate.matrix)


def test_non_finite_monodromy_is_rejected():
    with pytest.raises(ConvergenceFailure):
        MonodromyEstimate("bad", np.full((6, 6), np.nan), 10, 0.0)


def _significant_digits(text: str) -> int:
    mantissa = text.lower().split("e")[0].lstrip("-").replace(".", "")
    return len(mantissa.strip("0"))


@pytest.mark.skipif(np.finfo(np.longdouble).precision <= np.finfo(float).precision,
                    reason="platform has no extended float type")
def test_precision_reaches_transport_output():
    digits = {}
    for precision in (53, 128):
        estimate = monodromy(get_loop("l1"), steps=1000, precision=precision)
        assert estimate.matrix.dtype == working_dtype(precision)
        node = encode_matrix(estimate.matrix)
        digits[precision] = max(_significant_digits(text)
                                for row in node["data"] for pair in row for text in pair)
    assert digits[53] <= 17
    assert digits[128] > digits[53]


def test_working_dtype_follows_precision():
    assert working_dtype(53) == np.complex128
    assert working_dtype(64) == np.clongdouble
    assert determinant_residual(MonodromyEstimate("id", np.eye(6, dtype=np.clongdouble), 1, 0.0)) == 0
