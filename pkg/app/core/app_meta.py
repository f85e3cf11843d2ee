"""Application metadata constants."""

from __future__ import annotations

APP_NAME = "MindCell"
APP_VERSION = "0.4.0"
APP_DESCRIPTION = "Memory-restricted Mastermind codebreakers and their experiment bench"
