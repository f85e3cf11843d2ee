from __future__ import annotations

import itertools
from dataclasses import replace

import numpy as np
import pytest

from app.core.codec import size_two_layout, substitute_block
from app.core.codemakers import FixedCodemaker
from app.core.consistent import consistent_fragments
from app.core.errors import ArgumentError, InfeasibleLayoutError, LayoutCorruptionError
from app.core.game import CodeString, GameParams, eq, random_code
from app.core.harness import GameTranscript, run_game, statelessness_check
from app.core.randomness import RandomStream
from app.core.strategies import SizeTwoStrategy
from app.core.strategies.size_two import (
    SizeTwoMove,
    delta_contribution,
    open_block,
    reconstruct_history_size_two,
    write_record,
)


def _play(n: int, k: int, seed: int, cap: int, **layout_kw) -> tuple[GameTranscript, CodeString]:
    params = GameParams(n, k)
    secret = random_code(params, np.random.default_rng(seed))
    strategy = SizeTwoStrategy(params, size_two_layout(n, k, **layout_kw))
    transcript = run_game(
        strategy, FixedCodemaker(params, secret), params, 2, cap, RandomStream(seed)
    )
    return transcript, secret


def _check_stored_evidence(transcript: GameTranscript, secret: CodeString, layout) -> int:
    """Every decoded record must give the exact on-block matches; returns blocks seen."""
    k = layout.k
    seen = set()
    for memory in transcript.memories:
        if len(memory) != 2:
            continue
        [(y, _)] = [p for p in memory.pairs if p[0][-1] == 0]
        [(x, _)] = [p for p in memory.pairs if p[0][-1] == 1]
        history = reconstruct_history_size_two(x, layout)
        if history.block == 0:
            continue
        span = layout.block(history.block)
        assert y[: span.first - 1] == secret[: span.first - 1]
        assert y[span.last :] == (0,) * (layout.n - span.last)
        if len(history.references) < k:
            continue
        seen.add(history.block)
        target = secret[span.slice]
        for fragment, delta in history.evidence(span.size, k):
            assert delta == eq(fragment, target)
    return len(seen)


class FullHistoryBlockSolver:
    """Block-wise random guessing that keeps every answer it has seen.

    The consistent set of a block is computed straight from raw answers: a
    fragment ``w`` fits when ``answer - eq(w, variant)`` is one constant over all
    variants of the block.
    """

    def __init__(self, params: GameParams, layout, rng: np.random.Generator) -> None:
        self.params = params
        self.layout = layout
        self.rng = rng
        self.queries = 0

    def _ask(self, codemaker: FixedCodemaker, x: CodeString) -> int:
        self.queries += 1
        return codemaker.answer(x).black

    def block_sets(self, codemaker: FixedCodemaker):
        n, k = self.params.n, self.params.k
        layout = self.layout
        y = (0,) * n
        y_answer = self._ask(codemaker, y)
        for i in range(1, layout.block_count + 1):
            span = layout.block(i)
            variants = []
            for c in range(k):
                fragment = (c,) * span.size
                variants.append((fragment, self._ask(codemaker, substitute_block(y, span, fragment))))
            for _ in range(layout.t):
                fragment = tuple(int(c) for c in self.rng.integers(0, k, size=span.size))
                variants.append((fragment, self._ask(codemaker, substitute_block(y, span, fragment))))
            direct = tuple(
                w
                for w in itertools.product(range(k), repeat=span.size)
                if len({a - eq(w, f) for f, a in variants}) == 1
            )
            yield i, y, y_answer, variants, direct
            offset = (sum(a for _, a in variants[:k]) - span.size) // k
            while True:
                w = direct[int(self.rng.integers(len(direct)))]
                guess = substitute_block(y, span, w)
                black = self._ask(codemaker, guess)
                if black - offset == span.size:
                    y, y_answer = guess, black
                    break
                variants.append((w, black))
                direct = tuple(
                    v for v in direct if len({a - eq(v, f) for f, a in variants}) == 1
                )


# ── Δ arithmetic ──


def test_delta_contribution_cancels_the_off_block_part() -> None:
    assert delta_contribution(9, (7, 7), 4, 2) == 4
    assert delta_contribution(5, (7, 7), 4, 2) == 0
    assert delta_contribution(6, (4, 3, 5), 3, 3) == 3


def test_delta_contribution_rejects_inconsistent_references() -> None:
    with pytest.raises(LayoutCorruptionError):
        delta_contribution(9, (7, 8), 4, 2)
    with pytest.raises(LayoutCorruptionError):
        delta_contribution(20, (7, 7), 4, 2)
    with pytest.raises(ArgumentError):
        delta_contribution(9, (7,), 4, 2)


def test_written_records_read_back() -> None:
    layout = size_two_layout(128, 2)
    y = (0,) * 128
    x = open_block(y, 60, 2, layout)
    x = write_record(x, layout, 2, 1, (1,) * 12, 64)
    x = write_record(x, layout, 2, 2, (0, 1) * 6, 61)
    history = reconstruct_history_size_two(x, layout)
    assert history.block == 2
    assert history.references == (60, 64)
    assert history.samples == (((0, 1) * 6, 61),)


# ── games ──


@pytest.mark.parametrize("n,seed", [(64, 1), (64, 2), (128, 3)])
def test_wins_with_exact_records(n: int, seed: int) -> None:
    transcript, secret = _play(n, 2, seed, 50 * n)
    assert transcript.won
    assert transcript.queries[-1].guess == secret
    assert all(len(m) <= 2 for m in transcript.memories)
    layout = size_two_layout(n, 2)
    assert _check_stored_evidence(transcript, secret, layout) == layout.block_count
    counts = transcript.phase_counts()
    assert counts["phase0"] == 2
    assert counts["phase2"] == 0


def test_three_colors_keep_exact_records() -> None:
    transcript, secret = _play(144, 3, 5, 50 * 144, block_size=6)
    layout = size_two_layout(144, 3, block_size=6)
    assert transcript.won
    assert _check_stored_evidence(transcript, secret, layout) == layout.block_count


@pytest.mark.parametrize(
    "n,seed",
    [(64, 1), (64, 2), (64, 3), (64, 4), (64, 5), pytest.param(144, 6, marks=pytest.mark.slow)],
)
def test_three_colors_win_with_default_layout(n: int, seed: int) -> None:
    transcript, secret = _play(n, 3, seed, 50 * n)
    assert transcript.won
    assert transcript.queries[-1].guess == secret


@pytest.mark.parametrize("n,k,seed", [(64, 2, 11), (64, 3, 12), (128, 2, 13)])
def test_resolution_never_repeats_a_guess(n: int, k: int, seed: int) -> None:
    params = GameParams(n, k)
    secret = random_code(params, np.random.default_rng(seed))
    strategy = SizeTwoStrategy(params)
    layout = strategy.layout
    transcript = run_game(
        strategy, FixedCodemaker(params, secret), params, 2, 50 * n, RandomStream(seed)
    )
    assert transcript.won
    guesses: dict[int, list[CodeString]] = {}
    sizes: dict[int, int] = {}
    for record, memory in zip(transcript.queries, transcript.memories):
        if strategy.plan(memory) is not SizeTwoMove.RESOLVE:
            continue
        history = strategy.view(memory).history
        span = layout.block(history.block)
        guesses.setdefault(history.block, []).append(record.guess[span.slice])
        if history.block not in sizes:
            evidence = history.evidence(span.size, k)
            sizes[history.block] = len(consistent_fragments(evidence, span.size, k))
    assert guesses
    for block, tried in guesses.items():
        assert len(tried) == len(set(tried))
        assert len(tried) <= sizes[block]
        assert tried[-1] == secret[layout.block(block).slice]


def test_stored_records_give_the_same_sets_as_full_history() -> None:
    params = GameParams(128, 2)
    layout = size_two_layout(128, 2)
    rng = np.random.default_rng(9)
    secret = random_code(params, rng)
    solver = FullHistoryBlockSolver(params, layout, rng)
    for i, y, y_answer, variants, direct in solver.block_sets(FixedCodemaker(params, secret)):
        x = open_block(y, y_answer, i, layout)
        for slot, (fragment, answer) in enumerate(variants[1:], start=1):
            x = write_record(x, layout, i, slot, fragment, answer)
        size = layout.block(i).size
        evidence = reconstruct_history_size_two(x, layout).evidence(size, 2)
        assert consistent_fragments(evidence, size, 2) == direct
        assert secret[layout.block(i).slice] in direct
    assert solver.queries > 0


def test_replays_step_by_step() -> None:
    params = GameParams(64, 2)
    stream = RandomStream(4)
    secret = random_code(params, np.random.default_rng(4))
    transcript = run_game(
        SizeTwoStrategy(params), FixedCodemaker(params, secret), params, 2, 3200, stream
    )
    assert statelessness_check(lambda: SizeTwoStrategy(params), transcript, stream)


def test_layout_must_match_the_game() -> None:
    with pytest.raises(ArgumentError):
        SizeTwoStrategy(GameParams(64, 2), size_two_layout(128, 2))


def test_layout_must_fit_the_storage_string() -> None:
    layout = size_two_layout(128, 2)
    with pytest.raises(InfeasibleLayoutError):
        SizeTwoStrategy(GameParams(128, 2), replace(layout, t=10))
    with pytest.raises(InfeasibleLayoutError):
        SizeTwoStrategy(GameParams(128, 2), replace(layout, s=2))
