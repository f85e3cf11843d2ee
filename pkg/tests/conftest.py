"""Shared fixtures.

Every test runs against the built-in defaults: ``config.yaml`` is pointed at
a per-test temporary path and the notice store starts empty.
"""

from __future__ import annotations

from collections.abc import Iterator
from pathlib import Path

import numpy as np
import pytest

import app.core.config as config_module
from app.core.notifications import get_notifications


@pytest.fixture(autouse=True)
def isolated_config(tmp_path: Path, monkeypatch: pytest.MonkeyPatch) -> Iterator[Path]:
    path = tmp_path / "config.yaml"
    monkeypatch.setattr(config_module, "CONFIG_PATH", path)
    monkeypatch.setattr(config_module, "_snapshot", None)
    get_notifications(clear=True)
    yield path
    get_notifications(clear=True)


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(20120101)
