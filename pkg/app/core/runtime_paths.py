"""Runtime path helpers.

The runtime root holds ``config.yaml`` and the default output directory.  It is
the source checkout unless ``MINDCELL_HOME`` points somewhere else.
"""

from __future__ import annotations

import os
from pathlib import Path

from app.core.app_meta import APP_NAME

SOURCE_ROOT = Path(__file__).resolve().parent.parent.parent
HOME_ENV_VAR = f"{APP_NAME.upper()}_HOME"


def get_runtime_root() -> Path:
    """Return writable runtime directory for config and experiment output."""
    override = os.getenv(HOME_ENV_VAR, "").strip()
    if override:
        runtime_root = Path(override).expanduser().resolve()
        runtime_root.mkdir(parents=True, exist_ok=True)
        return runtime_root
    return SOURCE_ROOT


def get_output_dir() -> Path:
    """Return the directory used for CSV and transcript files by default."""
    return get_runtime_root() / "data"
