"""Configuration manager for MindCell.

``config.yaml`` at the runtime root overrides the built-in defaults key by
key, one section at a time.  A missing file means defaults.  A broken file,
a section that is not a mapping or a value that fails its rule also means
defaults for that part, plus a notice naming what was ignored.
"""

from __future__ import annotations

import copy
import threading
from collections.abc import Callable
from dataclasses import dataclass
from pathlib import Path
from typing import Any

import yaml

from app.core.notifications import push_notification
from app.core.runtime_paths import get_output_dir, get_runtime_root

CONFIG_PATH = get_runtime_root() / "config.yaml"
DATA_DIR = get_output_dir()

DEFAULTS: dict[str, dict[str, Any]] = {
    "game": {
        "devil_max_codes": 1 << 16,
        "enumeration_budget": 1 << 24,
    },
    "layout": {
        "epsilon": 1.0,
        "big_k": 10.0,
        "block_candidates": 1 << 20,
    },
    "experiment": {
        "query_cap_factor": 50,
        "workers": 4,
        "trials": 30,
        "seed": 20120101,
    },
    "server": {
        "host": "127.0.0.1",
        "port": 8731,
        "token": "",
    },
}


# ── Value rules ───────────────────────────────────────────────────────────


def _integer(value: Any, low: int, high: int | None = None) -> bool:
    if isinstance(value, bool) or not isinstance(value, int):
        return False
    return value >= low and (high is None or value <= high)


def _number(value: Any, *, positive: bool) -> bool:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        return False
    return value > 0 if positive else value >= 0


Rule = tuple[str, str, str, Callable[[Any], bool]]

_RULES: tuple[Rule, ...] = (
    ("game", "devil_max_codes", "a positive integer", lambda v: _integer(v, 1)),
    ("game", "enumeration_budget", "a positive integer", lambda v: _integer(v, 1)),
    ("layout", "epsilon", "a positive number", lambda v: _number(v, positive=True)),
    ("layout", "big_k", "a non-negative number", lambda v: _number(v, positive=False)),
    ("layout", "block_candidates", "a positive integer", lambda v: _integer(v, 1)),
    ("experiment", "query_cap_factor", "a positive integer", lambda v: _integer(v, 1)),
    ("experiment", "workers", "a positive integer", lambda v: _integer(v, 1)),
    ("experiment", "trials", "a non-negative integer", lambda v: _integer(v, 0)),
    ("experiment", "seed", "a non-negative integer", lambda v: _integer(v, 0)),
    ("server", "host", "a host name", lambda v: isinstance(v, str) and bool(v.strip())),
    ("server", "port", "a TCP port", lambda v: _integer(v, 1, 65535)),
    ("server", "token", "a string", lambda v: isinstance(v, str)),
)


def _notice(message: str) -> None:
    push_notification(f"config.yaml: {message}", source="config")


# ── Loading ───────────────────────────────────────────────────────────────


def _read(path: Path) -> dict[str, Any]:
    """Top-level mapping of the file, or ``{}`` after a notice."""
    try:
        with open(path, "r", encoding="utf-8") as f:
            raw = yaml.safe_load(f)
    except yaml.YAMLError:
        push_notification("config.yaml is not valid YAML; using defaults.", source="config")
        return {}
    except OSError:
        push_notification("config.yaml could not be read; using defaults.", source="config")
        return {}
    if raw is None:
        return {}
    if not isinstance(raw, dict):
        push_notification("config.yaml is not a mapping; using defaults.", source="config")
        return {}
    return raw


def _merge(overrides: dict[str, Any]) -> dict[str, Any]:
    merged: dict[str, Any] = copy.deepcopy(DEFAULTS)
    for name, value in overrides.items():
        if name not in merged:
            merged[name] = value
        elif isinstance(value, dict):
            merged[name].update(value)
        elif value is not None:
            _notice(f"section {name} is not a mapping; using its defaults.")
    return merged


def _apply_rules(cfg: dict[str, Any]) -> dict[str, Any]:
    for name, key, expected, accepts in _RULES:
        value = cfg[name].get(key)
        if not accepts(value):
            default = DEFAULTS[name][key]
            _notice(f"{name}.{key}={value!r} is not {expected}; using {default!r}.")
            cfg[name][key] = default
    return cfg


@dataclass(frozen=True, slots=True)
class _Snapshot:
    path: Path
    mtime: float
    data: dict[str, Any]


_lock = threading.Lock()
_snapshot: _Snapshot | None = None


def load_config() -> dict[str, Any]:
    """Defaults merged with ``config.yaml``; a private copy on every call.

    The file is parsed again only when ``CONFIG_PATH`` or its mtime changed.
    """
    global _snapshot

    path = CONFIG_PATH
    try:
        mtime = path.stat().st_mtime
    except FileNotFoundError:
        return copy.deepcopy(DEFAULTS)
    except OSError:
        mtime = 0.0

    with _lock:
        cached = _snapshot
    if cached is not None and cached.path == path and cached.mtime == mtime:
        return copy.deepcopy(cached.data)

    data = _apply_rules(_merge(_read(path)))
    with _lock:
        _snapshot = _Snapshot(path, mtime, data)
    return copy.deepcopy(data)


def section(name: str, cfg: dict[str, Any] | None = None) -> dict[str, Any]:
    """Return one config section (always a dict)."""
    if cfg is None:
        cfg = load_config()
    value = cfg.get(name, {})
    return value if isinstance(value, dict) else {}
