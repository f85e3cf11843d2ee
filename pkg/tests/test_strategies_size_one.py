from __future__ import annotations

import numpy as np
import pytest

from app.core.codec import block_of, size_one_layout, size_two_layout, tail_number
from app.core.codemakers import DevilCodemaker, FixedCodemaker
from app.core.errors import ArgumentError, LayoutCorruptionError
from app.core.game import CodeString, GameParams, eq, random_code
from app.core.harness import PHASES, GameTranscript, run_game, statelessness_check
from app.core.randomness import RandomStream
from app.core.strategies import SizeOneStrategy
from app.core.strategies.size_one import (
    SizeOnePhase,
    baseline_contribution,
    block_evidence,
    classify,
    endgame_guess,
    intermediate_string,
)


def _play(layout, seed: int) -> tuple[GameTranscript, CodeString]:
    params = GameParams(layout.n, layout.k)
    secret = random_code(params, np.random.default_rng(seed))
    transcript = run_game(
        SizeOneStrategy(params, layout),
        FixedCodemaker(params, secret),
        params,
        1,
        50 * layout.n,
        RandomStream(seed),
    )
    return transcript, secret


def _check_memories(transcript: GameTranscript, secret: CodeString, layout) -> set[SizeOnePhase]:
    """Decode every stored string against the secret; returns the phases seen."""
    seen: set[SizeOnePhase] = set()
    for memory in transcript.memories:
        assert len(memory) <= 1
        if not memory.pairs:
            continue
        x, answer = memory.only
        assert answer == eq(secret, x)
        view = classify(x, layout)
        seen.add(view.phase)
        if view.phase in (SizeOnePhase.PHASE0, SizeOnePhase.PHASE2):
            tn = tail_number(x)
            assert x[: tn - 1] == secret[: tn - 1]
        if view.phase not in (SizeOnePhase.SAMPLING, SizeOnePhase.OPTIMIZE) or x[0] != 0:
            continue
        assert x[layout.prefix_copy.slice] == secret[: layout.ell]
        for j in range(1, view.block):
            assert block_of(x, j, layout) == secret[layout.block(j).slice]
        if view.q >= layout.k:
            target = secret[layout.block(view.block).slice]
            assert baseline_contribution(x, layout) == eq((0,) * layout.s, target)
            for fragment, delta in block_evidence(x, layout):
                assert delta == eq(fragment, target)
    return seen


def _phase_order_is_monotone(transcript: GameTranscript) -> bool:
    order = [PHASES.index(q.phase) for q in transcript.queries]
    return order == sorted(order)


@pytest.mark.parametrize(
    "k,block_size,seed",
    [(2, 8, 1), (2, 8, 2), (3, 6, 3)],
)
def test_wins_with_exact_records_at_512(k: int, block_size: int, seed: int) -> None:
    layout = size_one_layout(512, k, block_size=block_size, samples=12, big_k=0.0)
    assert layout.b > 0
    transcript, secret = _play(layout, seed)
    assert transcript.won
    assert transcript.queries[-1].guess == secret
    seen = _check_memories(transcript, secret, layout)
    assert {
        SizeOnePhase.PHASE0,
        SizeOnePhase.INTERMEDIATE,
        SizeOnePhase.SAMPLING,
        SizeOnePhase.OPTIMIZE,
        SizeOnePhase.PREP,
        SizeOnePhase.PHASE2,
    } <= seen
    assert _phase_order_is_monotone(transcript)


@pytest.mark.parametrize("seed", range(5))
def test_wins_without_blocks(seed: int) -> None:
    layout = size_one_layout(64, 2)
    assert layout.b == 0
    transcript, secret = _play(layout, seed)
    assert transcript.won
    seen = _check_memories(transcript, secret, layout)
    assert SizeOnePhase.SAMPLING not in seen
    assert _phase_order_is_monotone(transcript)


@pytest.mark.parametrize("n,seed", [(64, 1), (64, 2), (64, 3), (144, 4), (144, 5)])
def test_three_colors_win_with_default_layout(n: int, seed: int) -> None:
    layout = size_one_layout(n, 3)
    transcript, secret = _play(layout, seed)
    assert transcript.won
    assert transcript.queries[-1].guess == secret
    _check_memories(transcript, secret, layout)
    assert _phase_order_is_monotone(transcript)


def test_wins_against_the_devil() -> None:
    params = GameParams(10, 2)
    for seed in range(3):
        transcript = run_game(
            SizeOneStrategy(params), DevilCodemaker(params), params, 1, 500, RandomStream(seed)
        )
        assert transcript.won
        assert transcript.secret == transcript.queries[-1].guess


def test_replays_step_by_step() -> None:
    layout = size_one_layout(512, 2, block_size=8, samples=12, big_k=0.0)
    params = GameParams(512, 2)
    stream = RandomStream(17)
    secret = random_code(params, np.random.default_rng(17))
    transcript = run_game(
        SizeOneStrategy(params, layout), FixedCodemaker(params, secret), params, 1, 600, stream
    )
    assert statelessness_check(lambda: SizeOneStrategy(params, layout), transcript, stream)


def test_intermediate_string_opens_block_one() -> None:
    layout = size_one_layout(512, 2, block_size=8, samples=12, big_k=0.0)
    prefix = (1, 0) * 5 + (1,)
    x = prefix + (0,) * (512 - layout.ell)
    y = intermediate_string(x, layout)
    assert len(y) == 512
    assert y[layout.prefix_copy.slice] == prefix
    view = classify(y, layout)
    assert (view.phase, view.block, view.q) == (SizeOnePhase.SAMPLING, 1, 0)


def test_endgame_guess_tries_every_other_pair(rng) -> None:
    x = (1,) * 8
    guesses = [endgame_guess(x, 3, rng) for _ in range(300)]
    assert all(g[:-2] == x[:-2] for g in guesses)
    seen = {g[-2:] for g in guesses}
    assert (1, 1) not in seen
    assert len(seen) == 8


def test_classify_rejects_foreign_suffixes() -> None:
    layout = size_one_layout(64, 2)
    with pytest.raises(LayoutCorruptionError):
        classify((0,) * 62 + (1, 0), layout)
    with pytest.raises(LayoutCorruptionError):
        classify((0,) * 62 + (0, 1), layout)


def test_layout_kind_is_checked() -> None:
    with pytest.raises(ArgumentError):
        SizeOneStrategy(GameParams(128, 2), size_two_layout(128, 2))
