"""
Configuration for corput.

All tunable parameters in one place. Loaded from:
1. Defaults (this file)
2. Config file (~/.config/corput/config.toml) if exists
3. Environment variables (CORPUT_*) override file
4. CLI flags override everything
"""

from __future__ import annotations

import contextlib
import os
try:
    import tomllib  # stdlib in 3.11+
except ModuleNotFoundError:  # Python 3.10
    import tomli as tomllib
from dataclasses import dataclass, field, fields
from pathlib import Path


@dataclass
class LimitsConfig:
    """Default limits for the verification suites (every one overridable by flag)."""
    discrepancy: int = 4096
    upper_bound: int = 2**22
    envelope_levels: int = 22
    polygon_levels: int = 20
    symmetry_levels: int = 20
    minimum: int = 2**20
    block_bounds: int = 2**20
    enumeration_levels: int = 20
    binomial_sum_levels: int = 30
    robbins: int = 500
    binom_points: int = 100
    sandwich_levels: int = 20
    census: int = 2**20
    fluctuation: int = 2**20
    cauchy_min_level: int = 5
    cauchy_max_level: int = 28
    monotone_level: int = 14
    continuity_level: int = 28
    stern: int = 2**20
    stern_levels: int = 24
    stern_reversal: int = 2**16
    stern_psi_level: int = 12
    corollary: int = 2**20
    reversal: int = 2**16
    reversal_params: int = 50
    matrix_params: int = 1000
    matrix_odd: int = 2**14
    matrix_eval_params: int = 50
    clt_limits: tuple[int, ...] = (2**16, 2**20, 2**24)
    clt_bins: int = 64
    limsup_level: int = 40


@dataclass
class PrecisionConfig:
    """Interval arithmetic settings."""
    bits: int = 160  # working precision of mpmath.iv
    max_psi_level: int = 200  # psi_eval refuses levels beyond this


@dataclass
class OutputConfig:
    """Serialization settings."""
    float_digits: int = 17


@dataclass
class ParallelConfig:
    """Worker partitioning."""
    jobs: int = 1
    chunk: int = 2**16  # indices per task when jobs > 1


@dataclass
class Config:
    """Root config with all settings."""
    limits: LimitsConfig = field(default_factory=LimitsConfig)
    precision: PrecisionConfig = field(default_factory=PrecisionConfig)
    output: OutputConfig = field(default_factory=OutputConfig)
    parallel: ParallelConfig = field(default_factory=ParallelConfig)


def get_config_path() -> Path:
    """Get config file path, respecting XDG."""
    xdg = os.environ.get("XDG_CONFIG_HOME")
    if xdg:
        return Path(xdg) / "corput" / "config.toml"
    return Path.home() / ".config" / "corput" / "config.toml"


def load_config() -> Config:
    """Load config from file if exists, else return defaults."""
    config = Config()
    path = get_config_path()

    if path.exists():
        try:
            with open(path, "rb") as f:
                data = tomllib.load(f)
            config = _apply_toml(config, data)
        except Exception:
            pass  # fall back to defaults on any error

    # env var overrides
    config = _apply_env(config)

    return config


def _apply_toml(config: Config, data: dict) -> Config:
    """Apply toml data to config, section by section, converting to the declared field type."""
    for section_field in fields(config):
        table = data.get(section_field.name)
        if not isinstance(table, dict):
            continue
        section = getattr(config, section_field.name)
        for f in fields(section):
            if f.name not in table:
                continue
            current = getattr(section, f.name)
            value = table[f.name]
            if isinstance(current, tuple):
                setattr(section, f.name, tuple(int(v) for v in value))
            else:
                setattr(section, f.name, type(current)(value))
    return config


def _apply_env(config: Config) -> Config:
    """Apply environment variable overrides."""
    env_map: dict[str, tuple[str, str, type]] = {
        "CORPUT_JOBS": ("parallel", "jobs", int),
        "CORPUT_CHUNK": ("parallel", "chunk", int),
        "CORPUT_PRECISION_BITS": ("precision", "bits", int),
        "CORPUT_MAX_PSI_LEVEL": ("precision", "max_psi_level", int),
        "CORPUT_FLOAT_DIGITS": ("output", "float_digits", int),
    }

    for env_key, (section, attr, conv) in env_map.items():
        val = os.environ.get(env_key)
        if val is not None:
            with contextlib.suppress(ValueError, AttributeError):
                setattr(getattr(config, section), attr, conv(val))

    return config


# Module-level config instance, loaded once on import
_config: Config | None = None


def get_config() -> Config:
    """Get the global config instance."""
    global _config
    if _config is None:
        _config = load_config()
    return _config


def reset_config() -> None:
    """Drop the cached config so the next get_config() reloads it."""
    global _config
    _config = None
