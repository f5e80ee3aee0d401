"""Runtime configuration: sensor geometry, action sets, and learning constants.

Config files are plain ``key = value`` text; unknown keys are rejected so a
typo can't silently fall back to a default.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, fields, replace

DEFAULT_MOVES = (0.0, 0.2, 0.4, 0.8, 1.6)
DEFAULT_TURNS = (0.25, -0.25, 0.5, -0.5, 1.0, -1.0, 1.57, -1.57)


@dataclass(frozen=True)
class SimConfig:
    beam_count: int = 660
    fov: float = math.radians(220.0)
    max_range: float = 25.0
    moves: tuple[float, ...] = DEFAULT_MOVES
    turns: tuple[float, ...] = DEFAULT_TURNS
    epsilon_wall: float = 0.2
    safety_margin: float = 0.1
    arrival_radius: float = 0.5
    cycle_cap: int = 1000
    door_arc_length: float = 0.5
    conveyor_cell_size: float = 2.0
    turn_lookahead: float = 1.0
    # empty tuple means "all tier-3 advisors"
    advisors: tuple[str, ...] = ()

    def with_overrides(self, **kwargs) -> "SimConfig":
        return replace(self, **kwargs)


class ConfigError(ValueError):
    pass


_FLOAT_KEYS = {
    "fov", "max_range", "epsilon_wall", "safety_margin", "arrival_radius",
    "door_arc_length", "conveyor_cell_size", "turn_lookahead",
}
_INT_KEYS = {"beam_count", "cycle_cap"}
_LIST_KEYS = {"moves", "turns"}
_STRLIST_KEYS = {"advisors"}


def parse_config(text: str) -> SimConfig:
    """Parse ``key = value`` lines into a SimConfig.  '#' starts a comment."""
    known = {f.name for f in fields(SimConfig)}
    values: dict = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}: expected 'key = value', got {raw!r}")
        key, _, val = line.partition("=")
        key, val = key.strip(), val.strip()
        if key not in known:
            raise ConfigError(f"line {lineno}: unknown key {key!r}")
        try:
            if key in _FLOAT_KEYS:
                values[key] = float(val)
            elif key in _INT_KEYS:
                values[key] = int(val)
            elif key in _LIST_KEYS:
                values[key] = tuple(float(v) for v in val.split(","))
            elif key in _STRLIST_KEYS:
                values[key] = tuple(v.strip() for v in val.split(",") if v.strip())
        except ValueError as exc:
            raise ConfigError(f"line {lineno}: bad value for {key}: {val!r}") from exc
    return SimConfig(**values)


def load_config(path: str) -> SimConfig:
    with open(path, "r", encoding="utf-8") as fh:
        return parse_config(fh.read())
