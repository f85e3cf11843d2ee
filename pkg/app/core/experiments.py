"""Seeded experiment grids.

A grid is one strategy and one codemaker over a list of ``n`` at a fixed
``k``.  Trial ``i`` of cell ``n`` always runs with seed
``derive_seed(base, n, k, i)``, so any cell can be rerun on its own and get
the same records.  Trials run on a thread pool; records come back in
(n, trial) order whatever order the workers finish in.
"""

from __future__ import annotations

import csv
import io
import logging
import os
import tempfile
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Annotated, Any, Literal

from pydantic import BaseModel, ConfigDict, Field, model_validator

from app.core.codemakers import Codemaker, DevilCodemaker, FixedCodemaker, RandomCodemaker
from app.core.config import load_config, section
from app.core.errors import EnumerationBudgetError, InfeasibleLayoutError, MastermindError
from app.core.game import GameParams, code_from_text, random_code
from app.core.harness import PHASES, GameTranscript, Strategy, run_game
from app.core.notifications import push_notification
from app.core.randomness import SECRET_STREAM, RandomStream, derive_seed
from app.core.stats import CellSummary, fit_loglog_slope, summarize
from app.core.strategies import STRATEGY_NAMES, build_strategy, check_mu, resolve_mu
from app.core.transcripts import write_transcript

_log = logging.getLogger(__name__)

CSV_HEADER = (
    "n", "k", "strategy", "codemaker", "mu", "seed", "queries",
    "phase0", "phase1", "phase2", "phase3", "won",
)

StrategyName = Literal["size-one", "size-two", "unrestricted", "rls"]
GridCodemaker = Literal["fixed", "random", "devil"]


# ── Configuration ─────────────────────────────────────────────────────────


class ExperimentConfig(BaseModel):
    """One grid.  ``None`` fields fall back to config.yaml / layout defaults."""

    model_config = ConfigDict(extra="forbid")

    strategy: StrategyName
    codemaker: GridCodemaker = "random"
    ns: list[Annotated[int, Field(ge=1)]] = Field(..., min_length=1)
    k: int = Field(2, ge=2)
    mu: int | None = Field(None, ge=1)
    trials: int = Field(30, ge=0)
    seed: int = Field(20120101, ge=0)
    epsilon: float | None = Field(None, gt=0)
    big_k: float | None = Field(None, ge=0)
    block_size: int | None = Field(None, ge=1)
    samples: int | None = Field(None, ge=0)
    query_cap: int | None = Field(None, ge=1)
    secret: str | None = None
    workers: int | None = Field(None, ge=1)
    transcript_dir: Path | None = None

    @model_validator(mode="after")
    def _check_pairing(self) -> ExperimentConfig:
        if self.mu is not None:
            check_mu(self.strategy, self.mu)
        if self.secret is not None:
            if self.codemaker != "fixed":
                raise ValueError("a secret can only be given to the fixed codemaker")
            if len(self.ns) != 1:
                raise ValueError("a secret pins n, so the grid must have a single n")
        return self

    def cap_for(self, n: int) -> int:
        if self.query_cap is not None:
            return self.query_cap
        return int(section("experiment", load_config())["query_cap_factor"]) * n

    def worker_count(self) -> int:
        if self.workers is not None:
            return self.workers
        return int(section("experiment", load_config())["workers"])


# ── Records ───────────────────────────────────────────────────────────────


@dataclass(slots=True)
class TrialRecord:
    n: int
    k: int
    strategy: str
    codemaker: str
    mu: int
    seed: int
    queries: int
    phases: dict[str, int]
    won: bool

    def to_row(self) -> list[Any]:
        return [
            self.n, self.k, self.strategy, self.codemaker, self.mu, self.seed, self.queries,
            *(self.phases.get(p, 0) for p in PHASES),
            int(self.won),
        ]

    def to_dict(self) -> dict[str, Any]:
        return dict(zip(CSV_HEADER, self.to_row()))


@dataclass(slots=True)
class SkippedCell:
    n: int
    k: int
    reason: str


@dataclass(slots=True)
class GridResult:
    records: list[TrialRecord] = field(default_factory=list)
    summaries: list[CellSummary] = field(default_factory=list)
    skipped: list[SkippedCell] = field(default_factory=list)
    slope: float | None = None

    @property
    def all_won(self) -> bool:
        return all(r.won for r in self.records)


def record_from_transcript(transcript: GameTranscript) -> TrialRecord:
    p = transcript.params
    return TrialRecord(
        n=p.n,
        k=p.k,
        strategy=transcript.strategy_name,
        codemaker=transcript.codemaker_name,
        mu=transcript.mu,
        seed=transcript.seed,
        queries=transcript.query_count,
        phases=transcript.phase_counts(),
        won=transcript.won,
    )


# ── Trials ────────────────────────────────────────────────────────────────


def _strategy_for(config: ExperimentConfig, params: GameParams) -> Strategy:
    return build_strategy(
        config.strategy,
        params,
        epsilon=config.epsilon,
        big_k=config.big_k,
        block_size=config.block_size,
        samples=config.samples,
    )


def make_codemaker(config: ExperimentConfig, params: GameParams, stream: RandomStream) -> Codemaker:
    if config.codemaker == "devil":
        return DevilCodemaker(params)
    if config.codemaker == "fixed":
        if config.secret is not None:
            return FixedCodemaker(params, code_from_text(config.secret, params))
        # per-trial secret from the trial stream; the random codemaker draws the same one
        return FixedCodemaker(params, random_code(params, stream.child(SECRET_STREAM).generator()))
    return RandomCodemaker(params, stream.child(SECRET_STREAM).generator())


def run_trial(config: ExperimentConfig, n: int, trial: int) -> GameTranscript:
    params = GameParams(n, config.k)
    stream = RandomStream(derive_seed(config.seed, n, config.k, trial))
    strategy = _strategy_for(config, params)
    mu = resolve_mu(config.strategy, strategy, config.mu)
    codemaker = make_codemaker(config, params, stream)
    return run_game(strategy, codemaker, params, mu, config.cap_for(n), stream)


def _preflight(config: ExperimentConfig, n: int) -> str | None:
    """Reason the cell cannot run, or ``None``."""
    try:
        params = GameParams(n, config.k)
        strategy = _strategy_for(config, params)
        resolve_mu(config.strategy, strategy, config.mu)
        if config.codemaker == "devil":
            DevilCodemaker(params)
    except (InfeasibleLayoutError, EnumerationBudgetError) as exc:
        return str(exc)
    return None


def run_grid(config: ExperimentConfig) -> GridResult:
    result = GridResult()
    cells: list[int] = []
    for n in config.ns:
        reason = _preflight(config, n)
        if reason is not None:
            push_notification(
                f"skipped {config.strategy} n={n} k={config.k}: {reason}",
                source="experiments",
            )
            result.skipped.append(SkippedCell(n, config.k, reason))
        else:
            cells.append(n)

    jobs = [(n, trial) for n in cells for trial in range(config.trials)]
    if jobs:
        workers = min(config.worker_count(), len(jobs))
        with ThreadPoolExecutor(max_workers=workers, thread_name_prefix="trial") as pool:
            futures = [pool.submit(run_trial, config, n, trial) for n, trial in jobs]
            transcripts = [f.result() for f in futures]
        for (n, trial), transcript in zip(jobs, transcripts):
            result.records.append(record_from_transcript(transcript))
            if config.transcript_dir is not None:
                write_transcript(transcript, config.transcript_dir, trial)

    result.summaries = summarize(result.records)
    means = [(s.n, s.mean) for s in result.summaries if s.mean > 0]
    if len({n for n, _ in means}) >= 2:
        try:
            result.slope = fit_loglog_slope([n for n, _ in means], [m for _, m in means])
        except MastermindError as exc:
            _log.warning("no log-log slope: %s", exc)
    _log.info(
        "grid %s/%s k=%d: %d records, %d skipped cells",
        config.strategy, config.codemaker, config.k, len(result.records), len(result.skipped),
    )
    return result


# ── CSV ───────────────────────────────────────────────────────────────────


def records_to_csv(records: list[TrialRecord]) -> str:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(CSV_HEADER)
    for record in records:
        writer.writerow(record.to_row())
    return buffer.getvalue()


def write_csv(records: list[TrialRecord], path: Path) -> Path:
    """Atomic CSV write via temp-file + rename."""
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(suffix=".tmp", prefix="grid_", dir=str(path.parent))
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as f:
            f.write(records_to_csv(records))
        os.replace(tmp, str(path))
    except BaseException:
        try:
            os.unlink(tmp)
        except OSError:
            pass
        raise
    return path


__all__ = [
    "CSV_HEADER",
    "STRATEGY_NAMES",
    "ExperimentConfig",
    "GridResult",
    "SkippedCell",
    "TrialRecord",
    "make_codemaker",
    "record_from_transcript",
    "records_to_csv",
    "run_grid",
    "run_trial",
    "write_csv",
]
