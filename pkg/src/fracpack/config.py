"""Run configuration: defaults, key=value config files, environment overrides.

Precedence, lowest to highest: built-in defaults, config file, FRACPACK_*
environment variables, explicit command-line options.
"""

from __future__ import annotations

import os
from dataclasses import dataclass

from .numeric import DEFAULT_MATERIALIZE_CAP
from .ifs import DEFAULT_ENUMERATION_CAP

DEFAULT_SEED = 0x5EED
DEFAULT_TRIALS_CAP = 10**6
ENV_PREFIX = "FRACPACK_"


@dataclass
class RunConfig:
    lam: str = "paper"
    seed: int = DEFAULT_SEED
    format: str = "json"
    out_dir: str = ""
    enum_cap: int = DEFAULT_ENUMERATION_CAP
    materialize_cap: int = DEFAULT_MATERIALIZE_CAP
    trials_cap: int = DEFAULT_TRIALS_CAP

    _KEYS = ("lambda", "seed", "format", "out_dir", "enum_cap",
             "materialize_cap", "trials_cap")

    def set_key(self, key: str, value: str) -> None:
        key = key.strip().lower()
        value = value.strip()
        if key == "lambda":
            self.lam = value
        elif key in ("seed", "enum_cap", "materialize_cap", "trials_cap"):
            try:
                setattr(self, key, int(value, 0))
            except ValueError as exc:
                raise ValueError(f"config key {key} needs an integer, got {value!r}") from exc
        elif key == "format":
            if value not in ("json", "csv"):
                raise ValueError(f"format must be json or csv, got {value!r}")
            self.format = value
        elif key == "out_dir":
            self.out_dir = value
        else:
            raise ValueError(f"unknown config key {key!r}; known keys: {', '.join(self._KEYS)}")


def load_config_file(path: str, cfg: RunConfig) -> RunConfig:
    """Apply key=value lines from a file; '#' starts a comment."""
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ValueError(f"{path}:{lineno}: expected key=value, got {raw.rstrip()!r}")
            key, _, value = line.partition("=")
            cfg.set_key(key, value)
    return cfg


def apply_env(cfg: RunConfig, environ=None) -> RunConfig:
    """Apply FRACPACK_LAMBDA, FRACPACK_SEED, ... overrides."""
    env = os.environ if environ is None else environ
    for key in RunConfig._KEYS:
        name = ENV_PREFIX + key.upper()
        if name in env:
            cfg.set_key(key, env[name])
    return cfg


def resolve_config(config_path: str | None = None, environ=None) -> RunConfig:
    cfg = RunConfig()
    if config_path:
        load_config_file(config_path, cfg)
    apply_env(cfg, environ)
    return cfg
