"""
Run configuration: defaults < TOML file < environment < command-line flags.

Example file:

    stages = ["snap", "cones", "fan"]
    steps = 1000000
    loops = ["l1", "l2", "con1"]
    precision = 128
    output = "reports/run.json"

    [custom_loops.around_c1]
    segments = [{kind = "arc", chart = "z", center = [[1, 0], [0, 0]], offset = [[-1e-4, 0], [0, 0]]}]
"""

import logging
import os
import tomllib
from dataclasses import asdict, dataclass, field, fields
from pathlib import Path
from typing import Any, Dict, List, Mapping, Optional, Tuple

from .errors import ConfigError
from .loops import BASE_POINT, LOOP_LIBRARY, SNAP_LOOPS, LoopSpec
from .transport import METHODS

logger = logging.getLogger(__name__)

STAGE_ORDER = ("amodel", "transport", "snap", "cones", "fan")
STAGE_DEPENDENCIES = {"snap": ("transport",)}
MIN_STEPS = 10 ** 3
MIN_PRECISION = 64

ENV_PRECISION = "OCTIC_PRECISION"
ENV_THREADS = "OCTIC_THREADS"
ENV_LOG_LEVEL = "OCTIC_LOG_LEVEL"


@dataclass
class RunConfig:
    stages: Tuple[str, ...] = STAGE_ORDER
    base_point: Tuple[complex, complex] = BASE_POINT
    steps: int = 10 ** 6
    loops: Tuple[str, ...] = SNAP_LOOPS
    precision: int = 128
    output: Optional[str] = None
    seed: int = 0
    method: str = "euler"
    threads: int = 1
    c11: int = 0
    search_trials: int = 0
    search_level: int = 12
    search_word_length: int = 5
    archive: Optional[str] = None
    max_error: Optional[float] = None
    log_level: str = "INFO"
    custom_loops: Dict[str, LoopSpec] = field(default_factory=dict)

    def validate(self) -> "RunConfig":
        if self.steps < MIN_STEPS:
            raise ConfigError(f"steps must be at least {MIN_STEPS}, got {self.steps}", steps=self.steps)
        if self.precision < MIN_PRECISION:
            raise ConfigError(f"precision must be at least {MIN_PRECISION} bits, got {self.precision}",
                              precision=self.precision)
        if self.method not in METHODS:
            raise ConfigError(f"Unknown method {self.method!r}; expected one of {METHODS}")
        if self.threads < 1:
            raise ConfigError(f"threads must be positive, got {self.threads}")
        if self.search_level < 1 or self.search_word_length < 1 or self.search_trials < 0:
            raise ConfigError("search level and word length must be positive, trials non-negative")
        unknown = [label for label in self.loops
                   if label not in LOOP_LIBRARY and label not in self.custom_loops]
        if unknown:
            raise ConfigError(f"Unknown loop(s) {unknown}", loops=unknown)
        self.stages = resolve_stages(self.stages)
        return self

    def to_dict(self) -> dict:
        """Report-friendly view; custom loops are written out segment by segment."""
        data = asdict(self)
        data["custom_loops"] = {label: loop.to_dict() for label, loop in self.custom_loops.items()}
        data["base_point"] = [[z.real, z.imag] for z in self.base_point]
        data["stages"] = list(self.stages)
        data["loops"] = list(self.loops)
        return data


def resolve_stages(requested) -> Tuple[str, ...]:
    """Close the requested stages under dependencies and put them in execution order."""
    if isinstance(requested, str):
        requested = [requested]
    wanted = set()
    for stage in requested:
        if stage == "all":
            wanted.update(STAGE_ORDER)
        elif stage in STAGE_ORDER:
            wanted.add(stage)
        else:
            raise ConfigError(f"Unknown stage {stage!r}; expected one of {STAGE_ORDER + ('all',)}",
                              stage=stage)
    pending = list(wanted)
    while pending:
        for dependency in STAGE_DEPENDENCIES.get(pending.pop(), ()):
            if dependency not in wanted:
                wanted.add(dependency)
                pending.append(dependency)
    if not wanted:
        raise ConfigError("No stages requested")
    return tuple(stage for stage in STAGE_ORDER if stage in wanted)


def _complex(value) -> complex:
    if isinstance(value, (list, tuple)):
        if len(value) != 2:
            raise ConfigError(f"Complex numbers are [re, im] pairs, got {value!r}")
        return complex(float(value[0]), float(value[1]))
    return complex(value)


def _as_tuple(value) -> Tuple[str, ...]:
    if isinstance(value, str):
        return tuple(v.strip() for v in value.split(",") if v.strip())
    return tuple(str(v) for v in value)


_CONVERTERS = {
    "stages": _as_tuple,
    "loops": _as_tuple,
    "base_point": lambda v: (_complex(v[0]), _complex(v[1])),
    "steps": int,
    "precision": int,
    "seed": int,
    "threads": int,
    "c11": int,
    "search_trials": int,
    "search_level": int,
    "search_word_length": int,
    "max_error": float,
    "output": str,
    "archive": str,
    "method": str,
    "log_level": lambda v: str(v).upper(),
}


def _apply(config: RunConfig, values: Mapping[str, Any], source: str):
    known = {f.name for f in fields(RunConfig)}
    for key, value in values.items():
        if key == "custom_loops" or value is None:
            continue
        if key not in known:
            raise ConfigError(f"Unknown configuration key {key!r} in {source}", key=key)
        try:
            setattr(config, key, _CONVERTERS[key](value))
        except (TypeError, ValueError, IndexError) as e:
            raise ConfigError(f"Invalid value for {key!r} in {source}: {value!r}", key=key) from e


def _custom_loops(tables: Mapping[str, Any], base_point) -> Dict[str, LoopSpec]:
    loops = {}
    for label, data in tables.items():
        if label in LOOP_LIBRARY:
            raise ConfigError(f"Custom loop {label!r} shadows a library loop", loop=label)
        data = dict(data)
        data.setdefault("base", [[z.real, z.imag] for z in base_point])
        loops[label] = LoopSpec.from_dict(label, data)
        logger.info(f"Loaded custom loop {label} with {len(loops[label].segments)} segment(s)")
    return loops


def read_toml(path) -> dict:
    path = Path(path)
    try:
        with path.open("rb") as handle:
            return tomllib.load(handle)
    except FileNotFoundError:
        raise ConfigError(f"Config file not found: {path}", path=str(path)) from None
    except tomllib.TOMLDecodeError as e:
        raise ConfigError(f"Config file {path} is not valid TOML: {e}", path=str(path)) from e


def environment_overrides(environ: Optional[Mapping[str, str]] = None) -> dict:
    environ = os.environ if environ is None else environ
    overrides = {}
    for name, key in ((ENV_PRECISION, "precision"), (ENV_THREADS, "threads"),
                      (ENV_LOG_LEVEL, "log_level")):
        if environ.get(name):
            overrides[key] = environ[name]
    return overrides


def load_config(path=None, overrides: Optional[Mapping[str, Any]] = None,
                environ: Optional[Mapping[str, str]] = None) -> RunConfig:
    """Build and validate a RunConfig from every source in precedence order."""
    config = RunConfig()
    file_values = read_toml(path) if path else {}
    _apply(config, file_values, str(path))
    _apply(config, environment_overrides(environ), "environment")
    _apply(config, overrides or {}, "command line")
    config.custom_loops = _custom_loops(file_values.get("custom_loops", {}), config.base_point)
    return config.validate()


def selected_loops(config: RunConfig) -> List[LoopSpec]:
    return [config.custom_loops.get(label) or LOOP_LIBRARY[label] for label in config.loops]
