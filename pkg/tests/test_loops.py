import math

import pytest

from octic_monodromy.errors import ConfigError
from octic_monodromy.loops import (
    BASE_POINT,
    LOOP_ALIASES,
    LOOP_LIBRARY,
    SNAP_LOOPS,
    LoopSpec,
    PathSegment,
    get_loop,
)

_CUSTOM = {
    "description": "small circle around z1 = 0",
    "segments": [
        {"kind": "arc", "chart": "z", "center": [[0, 0], [1e-4, 0]],
         "offset": [[1e-4, 0], [0, 0]], "rotate": [True, False]},
    ],
}


def test_library_covers_snap_loops():
    assert set(SNAP_LOOPS) <= set(LOOP_LIBRARY)
    for label in ("l6", "D11", "D12"):
        assert label in LOOP_LIBRARY


def test_library_loops_are_closed_at_base_point():
    for loop in LOOP_LIBRARY.values():
        loop.check_closed()
        assert loop.base == BASE_POINT


def test_reconstructed_loops_are_flagged():
    assert get_loop("l7").reconstructed
    assert get_loop("con2").reconstructed
    assert not get_loop("l1").reconstructed
    assert not get_loop("con1").reconstructed


def test_reference_powers():
    assert get_loop("C1").reference_power == 2
    assert get_loop("E2").reference_power == 2
    assert get_loop("l7").reference_power == 4
    assert get_loop("l1").reference == "T_m1"


def test_path_labels_resolve_to_library_loops():
    assert LOOP_ALIASES == {"l3": "C1", "l4'": "con1", "l5^2": "E2"}
    for alias, label in LOOP_ALIASES.items():
        assert get_loop(alias) is LOOP_LIBRARY[label]
        assert get_loop(alias).label == label


def test_unknown_loop():
    with pytest.raises(KeyError, match="known loops"):
        get_loop("l99")


def test_custom_loop_from_dict():
    loop = LoopSpec.from_dict("mine", _CUSTOM)
    assert loop.segments[0].start_point == pytest.approx(BASE_POINT)
    assert loop.segments[0].sweep == pytest.approx(2 * math.pi)
    assert LoopSpec.from_dict("mine", loop.to_dict()) == loop
    assert get_loop("mine", {"mine": loop}) is loop


def test_custom_loop_errors():
    with pytest.raises(ConfigError):
        LoopSpec.from_dict("empty", {"segments": []})
    with pytest.raises(ConfigError):
        LoopSpec.from_dict("open", {"segments": [
            {"kind": "line", "chart": "z", "start": [[1e-4, 0], [1e-4, 0]],
             "end": [[0.5, 0], [1e-4, 0]]},
        ]})
    with pytest.raises(ConfigError):
        LoopSpec.from_dict("bad", {"segments": [{"kind": "spiral"}]})


def test_inverse_loop_reverses_segments():
    loop = get_loop("C1")
    inverse = loop.inverse()
    assert len(inverse.segments) == len(loop.segments)
    assert inverse.segments[0].z_start() == pytest.approx(loop.segments[-1].z_end())
    assert inverse.segments[-1].z_end() == pytest.approx(loop.base)


def test_segment_validation():
    with pytest.raises(ValueError):
        PathSegment("curve", "z")
    with pytest.raises(ValueError):
        PathSegment.arc("z", (0, 0), (1, 1), sweep=7.0)
    assert PathSegment.line("z", (0.1, 0.1), (0.1, 0.1)).is_degenerate()
