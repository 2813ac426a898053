"""INI-backed pipeline configuration with strict key validation."""
from __future__ import annotations

import configparser
import dataclasses
import os
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional

from .classify import ClassifierConfig
from .filters import FilterConfig
from .matcher import MatchConfig

ENV_CONFIG = "LECTURESEG_CONFIG"


class ConfigError(ValueError):
    """Raised for unknown sections/keys or unparseable values."""


@dataclass(frozen=True)
class PipelineOptions:
    frame_interval_s: float = 22.5
    thumb_max_edge: int = 160
    threads: int = 1


@dataclass(frozen=True)
class PipelineConfig:
    classifier: ClassifierConfig = field(default_factory=ClassifierConfig)
    filter: FilterConfig = field(default_factory=FilterConfig)
    matcher: MatchConfig = field(default_factory=MatchConfig)
    pipeline: PipelineOptions = field(default_factory=PipelineOptions)


_SECTIONS = {
    "classifier": ClassifierConfig,
    "filter": FilterConfig,
    "matcher": MatchConfig,
    "pipeline": PipelineOptions,
}


def _coerce(section: str, key: str, raw: str, ftype):
    if ftype not in (int, float, bool, str):
        raise ConfigError(f"[{section}] {key}: not settable from a config file")
    try:
        if ftype is bool:
            if raw.lower() in ("1", "true", "yes", "on"):
                return True
            if raw.lower() in ("0", "false", "no", "off"):
                return False
            raise ValueError(raw)
        return ftype(raw)
    except ValueError as exc:
        raise ConfigError(f"[{section}] {key}: cannot parse {raw!r}") from exc


def load_config(path: Optional[str] = None) -> PipelineConfig:
    """Read configuration from `path`, the env override, or defaults."""
    if path is None:
        path = os.environ.get(ENV_CONFIG)
    if path is None:
        return PipelineConfig()
    if not Path(path).is_file():
        raise ConfigError(f"config file not found: {path}")
    parser = configparser.ConfigParser()
    try:
        parser.read(path)
    except configparser.Error as exc:
        raise ConfigError(f"invalid config syntax: {exc}") from exc

    kwargs = {}
    for section in parser.sections():
        if section not in _SECTIONS:
            raise ConfigError(f"unknown config section: [{section}]")
        cls = _SECTIONS[section]
        fields = {f.name: f for f in dataclasses.fields(cls)}
        values = {}
        defaults = cls()
        for key, raw in parser.items(section):
            if key not in fields:
                raise ConfigError(f"unknown key in [{section}]: {key}")
            values[key] = _coerce(section, key, raw, type(getattr(defaults, key)))
        kwargs[section] = cls(**values)
    return PipelineConfig(**kwargs)
