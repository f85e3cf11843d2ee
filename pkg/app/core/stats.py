"""Summary statistics over trial records.

Cells are keyed by ``(strategy, codemaker, n, k, mu)`` and reported in the
order they first appear in the record list.
"""

from __future__ import annotations

import math
from collections.abc import Sequence
from dataclasses import dataclass, field
from typing import TYPE_CHECKING, Any

import numpy as np

from app.core.errors import ArgumentError
from app.core.harness import PHASES

if TYPE_CHECKING:
    from app.core.experiments import TrialRecord

CellKey = tuple[str, str, int, int, int]


@dataclass(slots=True)
class CellSummary:
    strategy: str
    codemaker: str
    n: int
    k: int
    mu: int
    trials: int
    won: int
    mean: float
    median: float
    max: int
    normalized: float  # mean * log2(n) / n
    phase_means: dict[str, float] = field(default_factory=dict)

    def to_dict(self) -> dict[str, Any]:
        return {
            "strategy": self.strategy,
            "codemaker": self.codemaker,
            "n": self.n,
            "k": self.k,
            "mu": self.mu,
            "trials": self.trials,
            "won": self.won,
            "mean": self.mean,
            "median": self.median,
            "max": self.max,
            "normalized": self.normalized,
            "phase_means": dict(self.phase_means),
        }


def normalized_queries(queries: float, n: int) -> float:
    """``queries * log2(n) / n``; flat across n for an ``O(n / log n)`` strategy."""
    if n < 2:
        return float("nan")
    return queries * math.log2(n) / n


def cell_key(record: TrialRecord) -> CellKey:
    return (record.strategy, record.codemaker, record.n, record.k, record.mu)


def summarize_cell(records: Sequence[TrialRecord]) -> CellSummary:
    if not records:
        raise ArgumentError("cannot summarize an empty cell")
    keys = {cell_key(r) for r in records}
    if len(keys) != 1:
        raise ArgumentError("records of one cell must share strategy, codemaker, n, k and mu")
    strategy, codemaker, n, k, mu = keys.pop()
    queries = np.array([r.queries for r in records], dtype=np.float64)
    mean = float(queries.mean())
    return CellSummary(
        strategy=strategy,
        codemaker=codemaker,
        n=n,
        k=k,
        mu=mu,
        trials=len(records),
        won=sum(1 for r in records if r.won),
        mean=mean,
        median=float(np.median(queries)),
        max=int(queries.max()),
        normalized=normalized_queries(mean, n),
        phase_means={
            p: float(np.mean([r.phases.get(p, 0) for r in records])) for p in PHASES
        },
    )


def summarize(records: Sequence[TrialRecord]) -> list[CellSummary]:
    cells: dict[CellKey, list[TrialRecord]] = {}
    for record in records:
        cells.setdefault(cell_key(record), []).append(record)
    return [summarize_cell(group) for group in cells.values()]


def fit_loglog_slope(ns: Sequence[float], values: Sequence[float]) -> float:
    """Least-squares slope of ``log2(value)`` against ``log2(n)``."""
    if len(ns) != len(values):
        raise ArgumentError("ns and values differ in length")
    if len(set(ns)) < 2:
        raise ArgumentError("need at least two distinct n for a slope")
    x = np.asarray(ns, dtype=np.float64)
    y = np.asarray(values, dtype=np.float64)
    if np.any(x <= 0) or np.any(y <= 0):
        raise ArgumentError("log-log fit needs positive values")
    slope, _intercept = np.polyfit(np.log2(x), np.log2(y), 1)
    return float(slope)
