"""In-memory notice board for conditions worth surfacing after a run.

Skipped grid cells and configuration fallbacks are not errors: the run goes
on.  They are logged and also pinned here so the CLI summary and the
``/api/v1/notifications`` endpoint can show them afterwards.
"""

from __future__ import annotations

import logging
import threading
import time
from collections import deque
from dataclasses import asdict, dataclass, field
from typing import Any

_log = logging.getLogger(__name__)

NoticeKey = tuple[str, str, str]


@dataclass(slots=True)
class Notice:
    level: str  # "info" | "warning" | "error"
    message: str
    source: str = ""
    timestamp: float = field(default_factory=time.time)

    @property
    def key(self) -> NoticeKey:
        return (self.level, self.source, self.message)


class NoticeBoard:
    """Bounded, thread-safe; repeats of one notice inside ``window`` seconds are dropped."""

    def __init__(self, capacity: int = 200, window: float = 10.0) -> None:
        self._items: deque[Notice] = deque(maxlen=capacity)
        self._last_seen: dict[NoticeKey, float] = {}
        self._window = window
        self._lock = threading.Lock()

    def pin(self, notice: Notice) -> bool:
        with self._lock:
            previous = self._last_seen.get(notice.key)
            if previous is not None and notice.timestamp - previous <= self._window:
                return False
            self._last_seen[notice.key] = notice.timestamp
            self._items.append(notice)
            return True

    def snapshot(self, *, clear: bool = False) -> list[Notice]:
        with self._lock:
            items = list(self._items)
            if clear:
                self._items.clear()
                self._last_seen.clear()
        return items


_board = NoticeBoard()


def push_notification(message: str, *, level: str = "warning", source: str = "") -> None:
    """Pin a notice and log it at the matching level."""
    if not _board.pin(Notice(level=level, message=message, source=source)):
        return
    numeric = logging.getLevelName(level.upper())
    prefix = f"[{source}] " if source else ""
    _log.log(numeric if isinstance(numeric, int) else logging.WARNING, "%s%s", prefix, message)


def get_notifications(*, clear: bool = False) -> list[dict[str, Any]]:
    """Stored notices as dicts, oldest first; optionally empty the board."""
    return [asdict(n) for n in _board.snapshot(clear=clear)]
