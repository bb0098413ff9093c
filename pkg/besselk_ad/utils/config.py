"""
Configuration loader for the branch thresholds and run settings.
"""

from __future__ import annotations

import os
from pathlib import Path
from typing import Any, Dict

import yaml

from besselk_ad.numerics.besselk import BranchConfig
from besselk_ad.numerics.errors import ConfigError

DEFAULT_CONFIG: Dict[str, Any] = {
    "a1": 8.5,
    "a2": 15.0,
    "a3": 30.0,
    "nu1": 1.5,
    "t1_tol": 1e-15,
    "t2": 20,
    "t3": 20,
    "t4": 14,
    "near_int_tol": 5e-3,
    "half_int_tol": 1e-4,
    "halfint_min_x": 8.5,
    "halfint_m": 4,
    "temme_cf_x": 2.0,
    "uae_radius": 14.0,
}

THREADS_ENV = "THREADS"


def _merge_defaults(user_cfg: Dict[str, Any]) -> Dict[str, Any]:
    unknown = set(user_cfg or {}) - set(DEFAULT_CONFIG)
    if unknown:
        raise ConfigError(f"unknown config keys: {', '.join(sorted(unknown))}")
    merged = DEFAULT_CONFIG.copy()
    merged.update(user_cfg or {})
    return merged


def _parse_key_values(text: str, source: Path) -> Dict[str, Any]:
    parsed: Dict[str, Any] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"{source}:{lineno}: expected key=value, got {raw!r}")
        key, val = (part.strip() for part in line.split("=", 1))
        # strings here; BranchConfig.from_mapping coerces to the field types
        parsed[key] = val
    return parsed


def load_config(config_path: str | Path | None = None) -> Dict[str, Any]:
    """
    Load branch settings from ``config_path`` merged over the defaults.

    The file may be a YAML mapping or plain ``key=value`` lines. A missing
    file gives the defaults.
    """
    if config_path is None:
        return DEFAULT_CONFIG.copy()

    config_path = Path(config_path)
    if not config_path.exists():
        return DEFAULT_CONFIG.copy()

    text = config_path.read_text(encoding="utf-8")
    try:
        data = yaml.safe_load(text)
    except yaml.YAMLError:
        data = None
    if not isinstance(data, dict):
        data = _parse_key_values(text, config_path)
    return _merge_defaults(data)


def load_branch_config(config_path: str | Path | None = None) -> BranchConfig:
    return BranchConfig.from_mapping(load_config(config_path))


def max_workers() -> int:
    """Worker cap from $THREADS, else the CPU count; never below 1."""
    raw = os.environ.get(THREADS_ENV, "").strip()
    if raw:
        try:
            return max(1, int(raw))
        except ValueError as exc:
            raise ConfigError(f"{THREADS_ENV} must be an integer, got {raw!r}") from exc
    return max(1, os.cpu_count() or 1)
