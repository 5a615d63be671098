import pytest

from octic_monodromy.config import (
    STAGE_ORDER,
    RunConfig,
    environment_overrides,
    load_config,
    resolve_stages,
    selected_loops,
)
from octic_monodromy.errors import ConfigError
from octic_monodromy.loops import BASE_POINT, LOOP_LIBRARY

_CONFIG = """
stages = ["snap", "cones"]
steps = 20000
loops = ["l1", "l2", "around_z1"]
precision = 96
method = "rk4"

[custom_loops.around_z1]
description = "small circle around z1 = 0"
segments = [
  { kind = "arc", chart = "z", center = [[0, 0], [1e-4, 0]], offset = [[1e-4, 0], [0, 0]], rotate = [true, false] },
]
"""


def test_defaults():
    config = RunConfig().validate()
    assert config.stages == STAGE_ORDER
    assert config.steps == 10 ** 6
    assert config.precision == 128
    assert config.base_point == BASE_POINT


def test_resolve_stages():
    assert resolve_stages(["fan", "amodel"]) == ("amodel", "fan")
    assert resolve_stages(["snap"]) == ("transport", "snap")
    assert resolve_stages("all") == STAGE_ORDER
    with pytest.raises(ConfigError):
        resolve_stages(["plot"])
    with pytest.raises(ConfigError):
        resolve_stages([])


def test_toml_file_with_custom_loop(tmp_path):
    path = tmp_path / "run.toml"
    path.write_text(_CONFIG, encoding="utf-8")
    config = load_config(path, environ={})
    assert config.stages == ("transport", "snap", "cones")
    assert config.steps == 20000
    assert config.method == "rk4"
    loops = selected_loops(config)
    assert [loop.label for loop in loops] == ["l1", "l2", "around_z1"]
    assert loops[0] is LOOP_LIBRARY["l1"]
    assert loops[2].base == BASE_POINT
    assert config.to_dict()["custom_loops"]["around_z1"]["segments"][0]["kind"] == "arc"


def test_precedence_file_environment_flags(tmp_path):
    path = tmp_path / "run.toml"
    path.write_text("precision = 96\nthreads = 2\n", encoding="utf-8")
    config = load_config(path, overrides={"threads": 8},
                         environ={"OCTIC_PRECISION": "160", "OCTIC_THREADS": "4"})
    assert config.precision == 160
    assert config.threads == 8


def test_environment_overrides():
    assert environment_overrides({"OCTIC_LOG_LEVEL": "debug", "HOME": "/root"}) == {
        "log_level": "debug",
    }
    assert load_config(environ={"OCTIC_LOG_LEVEL": "debug"}).log_level == "DEBUG"


def test_path_labels_select_library_loops():
    config = load_config(overrides={"loops": "l3,l4',l5^2"}, environ={})
    assert config.loops == ("l3", "l4'", "l5^2")
    assert [loop.label for loop in selected_loops(config)] == ["C1", "con1", "E2"]


@pytest.mark.parametrize("overrides", [
    {"steps": 10},
    {"precision": 32},
    {"method": "midpoint"},
    {"threads": 0},
    {"loops": "l1,nowhere"},
    {"search_trials": -1},
    {"colour": "red"},
    {"steps": "many"},
])
def test_invalid_values(overrides):
    with pytest.raises(ConfigError):
        load_config(overrides=overrides, environ={})


def test_config_file_errors(tmp_path):
    with pytest.raises(ConfigError, match="not found"):
        load_config(tmp_path / "missing.toml", environ={})
    bad = tmp_path / "bad.toml"
    bad.write_text("steps = = 3\n", encoding="utf-8")
    with pytest.raises(ConfigError, match="not valid TOML"):
        load_config(bad, environ={})
    shadow = tmp_path / "shadow.toml"
    shadow.write_text('[custom_loops.l1]\nsegments = [{kind = "line", chart = "z", '
                      'start = [[1e-4, 0], [1e-4, 0]], end = [[1e-4, 0], [1e-4, 0]]}]\n',
                      encoding="utf-8")
    with pytest.raises(ConfigError, match="shadows"):
        load_config(shadow, environ={})
