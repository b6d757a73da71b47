"""Run configuration: a strict INI schema that round-trips losslessly.

Sections and keys mirror the CLI surface; unknown sections or keys are
errors so a typo can never silently fall back to a default.  Every run
writes its fully resolved configuration next to its outputs, and that file
parses back to an identical configuration.
"""

from __future__ import annotations

import configparser
from dataclasses import dataclass, field, fields as dc_fields
from pathlib import Path
from typing import Optional

__all__ = ["RunConfig", "ConfigError", "load_config", "load_config_string",
           "save_config", "RESOLVED_CONFIG_NAME"]

RESOLVED_CONFIG_NAME = "resolved_config.ini"


class ConfigError(ValueError):
    pass


@dataclass
class GridSection:
    n: int = 32
    box_side: float = 16.0 * 3.141592653589793


@dataclass
class RecipeSection:
    epsilon: float = 0.2
    profile: str = "exp-smoothstep"
    v0_amplitude: float = 0.0
    c0_amplitude: float = 0.0


@dataclass
class ParamsSection:
    mu: float = 1.0
    nu: float = 1.0
    alpha: float = 1.0


@dataclass
class SchemeSection:
    dt: Optional[float] = None      # None with auto_cfl=False is rejected at run time
    auto_cfl: bool = False
    T: float = 1.0
    cfl_advect: float = 0.4
    cfl_hall: float = 0.25
    dt_cap: float = 0.1
    blowup_factor: float = 1e6
    eta: Optional[float] = None     # default 2 * constant_C * delta when unset


@dataclass
class ConditionSection:
    constant_C: float = 1.0
    delta: float = 0.01


@dataclass
class IOSection:
    output_path: str = "out"
    observer_stride: int = 1
    checkpoint_stride: int = 0      # 0 = final checkpoint only
    seed: int = 0
    jobs: int = 1


_SECTION_TYPES = {
    "grid": GridSection,
    "recipe": RecipeSection,
    "params": ParamsSection,
    "scheme": SchemeSection,
    "condition": ConditionSection,
    "io": IOSection,
}


@dataclass
class RunConfig:
    grid: GridSection = field(default_factory=GridSection)
    recipe: RecipeSection = field(default_factory=RecipeSection)
    params: ParamsSection = field(default_factory=ParamsSection)
    scheme: SchemeSection = field(default_factory=SchemeSection)
    condition: ConditionSection = field(default_factory=ConditionSection)
    io: IOSection = field(default_factory=IOSection)

    @property
    def eta(self) -> float:
        """Bootstrap threshold; defaults to 2 * constant_C * delta."""
        if self.scheme.eta is not None:
            return self.scheme.eta
        return 2.0 * self.condition.constant_C * self.condition.delta


def _parse_value(raw: str, target_type, key: str):
    raw = raw.strip()
    if target_type is Optional[float]:
        if raw.lower() in ("", "none"):
            return None
        target_type = float
    try:
        if target_type is int:
            value = int(raw)
        elif target_type is float:
            value = float(raw)
        elif target_type is bool:
            low = raw.lower()
            if low in ("true", "yes", "on", "1"):
                return True
            if low in ("false", "no", "off", "0"):
                return False
            raise ValueError(raw)
        elif target_type is str:
            return raw
        else:
            raise ConfigError(f"unhandled type for key {key!r}")
    except ValueError:
        raise ConfigError(f"key {key!r}: cannot parse {raw!r}") from None
    return value


def _section_from_items(name: str, items) -> object:
    cls = _SECTION_TYPES[name]
    known = {f.name: f.type for f in dc_fields(cls)}
    type_map = {
        "n": int, "box_side": float,
        "epsilon": float, "profile": str, "v0_amplitude": float, "c0_amplitude": float,
        "mu": float, "nu": float, "alpha": float,
        "dt": Optional[float], "auto_cfl": bool, "T": float,
        "cfl_advect": float, "cfl_hall": float, "dt_cap": float,
        "blowup_factor": float, "eta": Optional[float],
        "constant_C": float, "delta": float,
        "output_path": str, "observer_stride": int, "checkpoint_stride": int,
        "seed": int, "jobs": int,
    }
    kwargs = {}
    for key, raw in items:
        if key not in known:
            raise ConfigError(f"unknown key {key!r} in section [{name}]")
        kwargs[key] = _parse_value(raw, type_map[key], f"{name}.{key}")
    return cls(**kwargs)


def _config_from_parser(parser: configparser.ConfigParser) -> RunConfig:
    sections = {}
    for name in parser.sections():
        if name not in _SECTION_TYPES:
            raise ConfigError(f"unknown section [{name}]")
        sections[name] = _section_from_items(name, parser.items(name))
    return RunConfig(**sections)


def load_config(path) -> RunConfig:
    """Parse an INI config file; unknown sections or keys raise ConfigError."""
    parser = configparser.ConfigParser(interpolation=None)
    parser.optionxform = str  # keys are case-sensitive (constant_C, T)
    read = parser.read(path)
    if not read:
        raise ConfigError(f"cannot read config file {path!r}")
    return _config_from_parser(parser)


def load_config_string(text: str) -> RunConfig:
    parser = configparser.ConfigParser(interpolation=None)
    parser.optionxform = str
    parser.read_string(text)
    return _config_from_parser(parser)


def _format_value(value) -> str:
    if value is None:
        return "none"
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return repr(value)
    return str(value)


def save_config(config: RunConfig, path) -> None:
    """Write the fully resolved configuration; reparsing reproduces it exactly."""
    lines = []
    for name in ("grid", "recipe", "params", "scheme", "condition", "io"):
        section = getattr(config, name)
        lines.append(f"[{name}]")
        for f in dc_fields(type(section)):
            lines.append(f"{f.name} = {_format_value(getattr(section, f.name))}")
        lines.append("")
    Path(path).write_text("\n".join(lines))


def apply_overrides(config: RunConfig, overrides: dict) -> RunConfig:
    """Apply dotted-key overrides like {'params.mu': 2.0}; unknown keys raise."""
    for dotted, value in overrides.items():
        if value is None:
            continue
        try:
            section_name, key = dotted.split(".", 1)
            section = getattr(config, section_name)
            if not any(f.name == key for f in dc_fields(type(section))):
                raise AttributeError(key)
        except (ValueError, AttributeError):
            raise ConfigError(f"unknown config key {dotted!r}") from None
        setattr(section, key, value)
    return config
