"""Pydantic schemas for the MindCell API."""

from __future__ import annotations

from typing import Any, Literal

from pydantic import BaseModel, ConfigDict, Field

from app.core.experiments import GridCodemaker, StrategyName


# ── Games ─────────────────────────────────────────────────────────────────


class GameRequest(BaseModel):
    model_config = ConfigDict(extra="forbid")

    strategy: StrategyName
    codemaker: GridCodemaker = "random"
    n: int = Field(..., ge=1, le=1 << 14)
    k: int = Field(2, ge=2, le=64)
    mu: int | None = Field(None, ge=1)
    seed: int = Field(0, ge=0)
    secret: str | None = Field(None, description="code text for the fixed codemaker")
    epsilon: float | None = Field(None, gt=0)
    big_k: float | None = Field(None, ge=0)
    block_size: int | None = Field(None, ge=1)
    samples: int | None = Field(None, ge=0)
    query_cap: int | None = Field(None, ge=1)


class QueryItem(BaseModel):
    guess: str
    black: int
    phase: str


class GameResponse(BaseModel):
    strategy: str
    codemaker: str
    n: int
    k: int
    mu: int
    seed: int
    won: bool
    winning_index: int | None = None
    query_count: int
    phase_counts: dict[str, int]
    secret: str | None = None
    queries: list[QueryItem] = Field(default_factory=list)


# ── Experiments ───────────────────────────────────────────────────────────


class ExperimentRequest(BaseModel):
    """A grid small enough to run inside one request."""

    model_config = ConfigDict(extra="forbid")

    strategy: StrategyName
    codemaker: GridCodemaker = "random"
    ns: list[int] = Field(..., min_length=1, max_length=8)
    k: int = Field(2, ge=2, le=16)
    mu: int | None = Field(None, ge=1)
    trials: int = Field(5, ge=0, le=200)
    seed: int = Field(20120101, ge=0)
    epsilon: float | None = Field(None, gt=0)
    big_k: float | None = Field(None, ge=0)
    block_size: int | None = Field(None, ge=1)
    samples: int | None = Field(None, ge=0)
    query_cap: int | None = Field(None, ge=1)


class SkippedCellItem(BaseModel):
    n: int
    k: int
    reason: str


class ExperimentResponse(BaseModel):
    records: list[dict[str, Any]]
    summaries: list[dict[str, Any]]
    skipped: list[SkippedCellItem] = Field(default_factory=list)
    slope: float | None = None
    all_won: bool


# ── Layouts / notices ─────────────────────────────────────────────────────


class LayoutQuery(BaseModel):
    kind: Literal["size-one", "size-two"] = "size-one"
    n: int = Field(..., ge=1, le=1 << 20)
    k: int = Field(2, ge=2, le=64)
    epsilon: float | None = Field(None, gt=0)
    big_k: float | None = Field(None, ge=0)
    block_size: int | None = Field(None, ge=1)
    samples: int | None = Field(None, ge=0)


class NoticeItem(BaseModel):
    level: str
    message: str
    source: str = ""
    timestamp: float
