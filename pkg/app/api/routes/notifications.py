"""Notice routes."""

from __future__ import annotations

from fastapi import APIRouter

from app.api.schemas import NoticeItem
from app.core.notifications import get_notifications

router = APIRouter()


@router.get("", response_model=list[NoticeItem])
async def list_notifications(clear: bool = False):
    """Skipped grid cells and config fallbacks, oldest first."""
    return get_notifications(clear=clear)
