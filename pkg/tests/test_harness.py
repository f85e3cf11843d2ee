from __future__ import annotations

import numpy as np
import pytest

from app.core.codec import LayoutParams, size_one_layout
from app.core.codemakers import FixedCodemaker, RandomCodemaker
from app.core.errors import ArgumentError, ContractViolationError
from app.core.game import CodeString, GameParams
from app.core.harness import (
    PHASES,
    MemoryState,
    Strategy,
    one_max_view,
    run_game,
    statelessness_check,
)
from app.core.randomness import SECRET_STREAM, RandomStream, derive_seed
from app.core.strategies import RlsStrategy, SizeOneStrategy, SizeTwoStrategy, UnrestrictedStrategy
from app.core.strategies.size_one import SizeOnePhase, classify


class CountingStrategy(Strategy):
    """Keeps a call counter outside memory; replays must catch it."""

    name = "counting"

    def __init__(self, params: GameParams) -> None:
        super().__init__(params)
        self.calls = 0

    def propose(self, memory: MemoryState, rng: np.random.Generator) -> CodeString:
        self.calls += 1
        return (self.calls % self.params.k,) * self.params.n

    def select(self, memory, guess, black, rng) -> MemoryState:
        return memory.holding((guess, black))


class HoardingStrategy(Strategy):
    name = "hoarding"

    def propose(self, memory, rng) -> CodeString:
        return (0,) * self.params.n

    def select(self, memory, guess, black, rng) -> MemoryState:
        return memory.holding(*memory.pairs, (guess, black))


class ForgingStrategy(HoardingStrategy):
    def select(self, memory, guess, black, rng) -> MemoryState:
        return memory.holding((guess, black + 1))


class ShortGuessStrategy(HoardingStrategy):
    def propose(self, memory, rng) -> CodeString:
        return (0,) * (self.params.n - 1)


def _secret(params: GameParams, seed: int) -> CodeString:
    codemaker = RandomCodemaker(params, RandomStream(seed).child(SECRET_STREAM).generator())
    return codemaker.secret


def test_memory_state_capacity_and_only() -> None:
    memory = MemoryState(2)
    assert len(memory) == 0
    held = memory.holding(((0, 1), 1))
    assert held.capacity == 2
    assert held.only == ((0, 1), 1)
    with pytest.raises(ContractViolationError):
        memory.only
    with pytest.raises(ArgumentError):
        MemoryState(0)


def test_rls_game_is_recorded_and_won() -> None:
    params = GameParams(16, 2)
    stream = RandomStream(11)
    codemaker = FixedCodemaker(params, _secret(params, 11))
    transcript = run_game(RlsStrategy(params), codemaker, params, 1, 5000, stream)
    assert transcript.won
    assert transcript.winning_index == transcript.query_count - 1
    assert transcript.queries[-1].black == 16
    assert len(transcript.memories) == transcript.query_count
    assert all(len(m) <= 1 for m in transcript.memories)
    counts = transcript.phase_counts()
    assert set(counts) == set(PHASES)
    assert sum(counts.values()) == transcript.query_count
    assert counts["phase0"] == 1


def test_query_cap_ends_game_without_error() -> None:
    params = GameParams(64, 2)
    codemaker = FixedCodemaker(params, (1,) * 64)
    transcript = run_game(RlsStrategy(params), codemaker, params, 1, 3, RandomStream(2))
    assert transcript.query_count == 3
    assert not transcript.won
    with pytest.raises(ArgumentError):
        run_game(RlsStrategy(params), codemaker, params, 1, 0, RandomStream(2))


@pytest.mark.parametrize("strategy_cls", [HoardingStrategy, ForgingStrategy, ShortGuessStrategy])
def test_contract_violations_are_caught(strategy_cls) -> None:
    params = GameParams(6, 2)
    codemaker = FixedCodemaker(params, (1,) * 6)
    with pytest.raises(ContractViolationError):
        run_game(strategy_cls(params), codemaker, params, 1, 10, RandomStream(0))


def test_hoarding_is_fine_within_capacity() -> None:
    params = GameParams(6, 2)
    codemaker = FixedCodemaker(params, (1,) * 6)
    transcript = run_game(HoardingStrategy(params), codemaker, params, 10, 10, RandomStream(0))
    assert transcript.query_count == 10
    assert len(transcript.memories[-1]) == 9


def test_counting_strategy_fails_statelessness() -> None:
    params = GameParams(4, 2)
    stream = RandomStream(1)
    codemaker = FixedCodemaker(params, (1, 0, 1, 0))
    transcript = run_game(CountingStrategy(params), codemaker, params, 1, 5, stream)
    assert transcript.query_count == 5
    assert not statelessness_check(lambda: CountingStrategy(params), transcript, stream)


def _blocked_layout(params: GameParams) -> LayoutParams:
    return size_one_layout(params.n, params.k, block_size=8, samples=12, big_k=0.0)


def _blocked_size_one(params: GameParams) -> SizeOneStrategy:
    return SizeOneStrategy(params, _blocked_layout(params))


# (name, n, factory, mu, cap); a cap below 50 n cuts the game short on purpose.
_SHIPPED = [
    ("rls", 24, lambda p: RlsStrategy(p), 1, 1200),
    ("size-one", 24, lambda p: SizeOneStrategy(p), 1, 1200),
    ("size-one", 512, _blocked_size_one, 1, 300),
    ("size-two", 64, lambda p: SizeTwoStrategy(p), 2, 3200),
    ("unrestricted", 10, lambda p: UnrestrictedStrategy(p, samples=12), 13, 500),
]


def _replay_trials(name, n, factory, mu, cap, trials: int) -> None:
    params = GameParams(n, 2)
    for trial in range(trials):
        seed = derive_seed("replay", name, n, trial)
        stream = RandomStream(seed)
        codemaker = FixedCodemaker(params, _secret(params, seed))
        transcript = run_game(factory(params), codemaker, params, mu, cap, stream)
        if cap >= 50 * n:
            assert transcript.won
        assert statelessness_check(lambda: factory(params), transcript, stream)


@pytest.mark.parametrize("name,n,factory,mu,cap", _SHIPPED)
def test_shipped_strategies_replay_step_by_step(name, n, factory, mu, cap) -> None:
    _replay_trials(name, n, factory, mu, cap, 5)


@pytest.mark.slow
@pytest.mark.parametrize("name,n,factory,mu,cap", _SHIPPED)
def test_shipped_strategies_replay_on_a_hundred_transcripts(name, n, factory, mu, cap) -> None:
    _replay_trials(name, n, factory, mu, cap, 100)


def test_blocked_size_one_replay_reaches_the_sampling_phase() -> None:
    params = GameParams(512, 2)
    stream = RandomStream(derive_seed("replay", "size-one", 512, 0))
    codemaker = FixedCodemaker(params, _secret(params, 5))
    transcript = run_game(_blocked_size_one(params), codemaker, params, 1, 300, stream)
    layout = _blocked_layout(params)
    assert layout.b > 0
    seen = {classify(m.only[0], layout).phase for m in transcript.memories if m.pairs}
    assert SizeOnePhase.SAMPLING in seen
    assert statelessness_check(lambda: _blocked_size_one(params), transcript, stream)


def test_one_max_view_is_eq_with_the_target() -> None:
    fitness = one_max_view((1, 0, 1))
    assert fitness((1, 1, 1)) == 2
    assert fitness((1, 0, 1)) == 3
