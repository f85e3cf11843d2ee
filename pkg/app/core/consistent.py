"""Brute-force consistent sets.

Candidates are enumerated as a ``(k**length, length)`` digit matrix in
lexicographic order and filtered one sample at a time, so the surviving rows
stay sorted and sampling from them is reproducible.
"""

from __future__ import annotations

import logging
import math
from collections.abc import Iterable, Sequence
from functools import lru_cache

import numpy as np

from app.core.config import load_config, section
from app.core.errors import ArgumentError, EnumerationBudgetError
from app.core.game import CodeString, GameParams, eq, random_code

_log = logging.getLogger(__name__)

Evidence = tuple[tuple[CodeString, int], ...]


def enumeration_budget() -> int:
    return int(section("game", load_config())["enumeration_budget"])


def check_budget(k: int, length: int, budget: int | None = None) -> None:
    limit = enumeration_budget() if budget is None else budget
    if k**length > limit:
        raise EnumerationBudgetError(
            f"{k}^{length} candidates exceed the enumeration budget of {limit}"
        )


@lru_cache(maxsize=8)
def candidate_matrix(k: int, length: int) -> np.ndarray:
    """All ``k**length`` strings as rows, lexicographic order, read-only."""
    total = k**length
    index = np.arange(total, dtype=np.int64)
    matrix = np.empty((total, length), dtype=np.uint8)
    for col in range(length):
        matrix[:, col] = (index // k ** (length - 1 - col)) % k
    matrix.flags.writeable = False
    return matrix


def filter_candidates(
    candidates: np.ndarray, evidence: Iterable[tuple[Sequence[int], int]]
) -> np.ndarray:
    """Keep the rows ``w`` with ``eq(w, fragment) == contribution`` for every sample."""
    remaining = candidates
    for fragment, contribution in evidence:
        if remaining.shape[0] == 0:
            break
        row = np.asarray(fragment, dtype=np.uint8)
        matches = np.count_nonzero(remaining == row, axis=1)
        remaining = remaining[matches == contribution]
    return remaining


def normalize_evidence(
    evidence: Iterable[tuple[Sequence[int], int]], length: int
) -> Evidence:
    normalized: list[tuple[CodeString, int]] = []
    for fragment, contribution in evidence:
        frag = tuple(int(c) for c in fragment)
        if len(frag) != length:
            raise ArgumentError(f"fragment length {len(frag)} != {length}")
        if not 0 <= contribution <= length:
            raise ArgumentError(f"contribution {contribution} outside [0..{length}]")
        normalized.append((frag, int(contribution)))
    return tuple(normalized)


@lru_cache(maxsize=256)
def _consistent_rows(evidence: Evidence, length: int, k: int) -> np.ndarray:
    rows = filter_candidates(candidate_matrix(k, length), evidence)
    _log.debug(
        "consistent set over %d^%d with %d samples: %d rows",
        k, length, len(evidence), rows.shape[0],
    )
    return rows


def consistent_matrix(
    evidence: Iterable[tuple[Sequence[int], int]],
    length: int,
    k: int,
    *,
    budget: int | None = None,
) -> np.ndarray:
    """Consistent fragments as a sorted row matrix (shared, do not mutate)."""
    check_budget(k, length, budget)
    return _consistent_rows(normalize_evidence(evidence, length), length, k)


def consistent_fragments(
    evidence: Iterable[tuple[Sequence[int], int]],
    length: int,
    k: int,
    *,
    budget: int | None = None,
) -> tuple[CodeString, ...]:
    """Every fragment agreeing with all ``(fragment, contribution)`` samples."""
    rows = consistent_matrix(evidence, length, k, budget=budget)
    return tuple(tuple(int(c) for c in row) for row in rows)


def sample_consistent(
    evidence: Iterable[tuple[Sequence[int], int]],
    length: int,
    k: int,
    rng: np.random.Generator,
    *,
    budget: int | None = None,
) -> tuple[CodeString, int]:
    """Uniform member of the consistent set, plus the set size.

    Returns an empty tuple and size 0 when nothing is consistent.
    """
    rows = consistent_matrix(evidence, length, k, budget=budget)
    if rows.shape[0] == 0:
        return (), 0
    pick = int(rng.integers(rows.shape[0]))
    return tuple(int(c) for c in rows[pick]), int(rows.shape[0])


def _row_keys(rows: np.ndarray, k: int) -> np.ndarray:
    weights = k ** np.arange(rows.shape[1] - 1, -1, -1, dtype=np.int64)
    return rows.astype(np.int64) @ weights


def next_consistent(
    evidence: Iterable[tuple[Sequence[int], int]],
    length: int,
    k: int,
    after: Sequence[int],
    extra: Iterable[tuple[Sequence[int], int]] = (),
    *,
    budget: int | None = None,
) -> tuple[CodeString, int]:
    """First consistent fragment after ``after`` in cyclic lexicographic order.

    The consistent set of ``evidence`` (cached) is narrowed further by ``extra``.
    Stepping from the latest rejected guess, with that guess in ``extra``, never
    repeats a guess and reaches the secret within one pass over the set.
    Returns an empty tuple and size 0 when nothing is consistent.
    """
    rows = filter_candidates(
        consistent_matrix(evidence, length, k, budget=budget),
        normalize_evidence(extra, length),
    )
    if rows.shape[0] == 0:
        return (), 0
    start = normalize_evidence([(after, 0)], length)[0][0]
    key = sum(c * k ** (length - 1 - i) for i, c in enumerate(start))
    pick = int(np.searchsorted(_row_keys(rows, k), key, side="right")) % rows.shape[0]
    return tuple(int(c) for c in rows[pick]), int(rows.shape[0])


def consistent_sample_count(size: int, k: int, epsilon: float) -> int:
    """Number of uniform random samples after which the consistent set is tiny.

    ``ceil((2+eps) * size * (1 + 2 log2 k) / (log2 size - log2 k))``
    """
    if size <= k:
        raise ArgumentError(f"size must exceed k (size={size}, k={k})")
    if epsilon <= 0:
        raise ArgumentError(f"epsilon must be positive, got {epsilon}")
    numerator = (2.0 + epsilon) * size * (1.0 + 2.0 * math.log2(k))
    return math.ceil(numerator / (math.log2(size) - math.log2(k)))


def expected_consistent_size(
    n: int,
    k: int,
    epsilon: float,
    z_trials: int,
    rng: np.random.Generator,
    *,
    samples: int | None = None,
    budget: int | None = None,
) -> float:
    """Monte Carlo mean of the consistent-set size after ``t`` random guesses.

    ``samples`` overrides ``t``; otherwise ``consistent_sample_count(n, k, epsilon)``.
    """
    check_budget(k, n, budget)
    if z_trials < 1:
        raise ArgumentError("z_trials must be at least 1")
    t = consistent_sample_count(n, k, epsilon) if samples is None else samples
    params = GameParams(n, k)
    everything = candidate_matrix(k, n)
    sizes: list[int] = []
    for _ in range(z_trials):
        z = random_code(params, rng)
        guesses = [random_code(params, rng) for _ in range(t)]
        evidence = [(x, eq(z, x)) for x in guesses]
        sizes.append(int(filter_candidates(everything, evidence).shape[0]))
    return float(np.mean(sizes))
