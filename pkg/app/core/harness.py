"""Memory-restricted black-box scheme.

A strategy sees nothing but the current :class:`MemoryState` and a random
generator.  Each query step is

1. ``propose(memory, rng)`` picks the next guess,
2. the codemaker answers it,
3. ``select(memory, guess, black, rng)`` decides which pairs survive.

The harness owns the loop, the capacity check and the transcript.  Every step
gets a generator derived from ``(seed, step)``, so any step can be replayed
in isolation by a freshly built strategy.
"""

from __future__ import annotations

import logging
from abc import ABC, abstractmethod
from collections import Counter
from collections.abc import Callable, Sequence
from dataclasses import dataclass, field

import numpy as np

from app.core.codemakers import Codemaker
from app.core.errors import ArgumentError, ContractViolationError
from app.core.game import CodeString, GameParams, eq
from app.core.randomness import STEP_STREAM, RandomStream

_log = logging.getLogger(__name__)

Pair = tuple[CodeString, int]
PHASES = ("phase0", "phase1", "phase2", "phase3")


@dataclass(frozen=True, slots=True)
class MemoryState:
    capacity: int
    pairs: tuple[Pair, ...] = ()

    def __post_init__(self) -> None:
        if self.capacity < 1:
            raise ArgumentError(f"memory capacity must be at least 1, got {self.capacity}")

    def __len__(self) -> int:
        return len(self.pairs)

    def holding(self, *pairs: Pair) -> MemoryState:
        """Same capacity, new contents."""
        return MemoryState(self.capacity, tuple(pairs))

    @property
    def only(self) -> Pair:
        """The single stored pair of a one-cell memory."""
        if len(self.pairs) != 1:
            raise ContractViolationError(f"expected one stored pair, found {len(self.pairs)}")
        return self.pairs[0]


class Strategy(ABC):
    """Base class for codebreakers.

    Subclasses must not keep mutable state between calls: everything they
    know has to be in the memory passed in.
    """

    name: str = "strategy"

    def __init__(self, params: GameParams) -> None:
        self.params = params

    @abstractmethod
    def propose(self, memory: MemoryState, rng: np.random.Generator) -> CodeString: ...

    @abstractmethod
    def select(
        self,
        memory: MemoryState,
        guess: CodeString,
        black: int,
        rng: np.random.Generator,
    ) -> MemoryState: ...

    def phase(self, memory: MemoryState) -> str:
        """Accounting bucket (``phase0`` .. ``phase3``) of the next query."""
        return "phase1"


@dataclass(slots=True)
class QueryRecord:
    guess: CodeString
    black: int
    phase: str


@dataclass(slots=True)
class GameTranscript:
    params: GameParams
    mu: int
    seed: int
    strategy_name: str
    codemaker_name: str
    queries: list[QueryRecord] = field(default_factory=list)
    memories: list[MemoryState] = field(default_factory=list)
    winning_index: int | None = None
    secret: CodeString | None = None

    @property
    def won(self) -> bool:
        return self.winning_index is not None

    @property
    def query_count(self) -> int:
        return len(self.queries)

    def phase_counts(self) -> dict[str, int]:
        counts = Counter(q.phase for q in self.queries)
        return {p: counts.get(p, 0) for p in PHASES}


def _check_guess(guess: Sequence[int], params: GameParams) -> CodeString:
    code = tuple(guess)
    if len(code) != params.n:
        raise ContractViolationError(f"strategy guessed {len(code)} positions, n={params.n}")
    if any(not 0 <= c < params.k for c in code):
        raise ContractViolationError("strategy guessed a color outside the palette")
    return code


def _check_selection(
    old: MemoryState, new: MemoryState, pair: Pair, mu: int
) -> None:
    if len(new) > mu or new.capacity != mu:
        raise ContractViolationError(f"selection kept {len(new)} pairs, capacity {mu}")
    allowed = Counter(old.pairs)
    allowed[pair] += 1
    if Counter(new.pairs) - allowed:
        raise ContractViolationError("selection invented a pair that was never queried")


def step_generator(stream: RandomStream, step: int) -> np.random.Generator:
    return stream.child(STEP_STREAM, step).generator()


def run_game(
    strategy: Strategy,
    codemaker: Codemaker,
    params: GameParams,
    mu: int,
    query_cap: int,
    stream: RandomStream,
) -> GameTranscript:
    """Play until black = n or ``query_cap`` queries; never raises on the cap."""
    if query_cap < 1:
        raise ArgumentError(f"query cap must be at least 1, got {query_cap}")
    memory = MemoryState(mu)
    transcript = GameTranscript(
        params=params,
        mu=mu,
        seed=stream.seed,
        strategy_name=strategy.name,
        codemaker_name=codemaker.name,
    )

    for step in range(query_cap):
        rng = step_generator(stream, step)
        phase = strategy.phase(memory)
        guess = _check_guess(strategy.propose(memory, rng), params)
        black = codemaker.answer(guess).black
        transcript.queries.append(QueryRecord(guess, black, phase))
        transcript.memories.append(memory)
        if black == params.n:
            transcript.winning_index = step
            break
        selected = strategy.select(memory, guess, black, rng)
        _check_selection(memory, selected, (guess, black), mu)
        memory = selected

    transcript.secret = codemaker.secret
    _log.debug(
        "%s vs %s n=%d k=%d: %d queries, won=%s",
        strategy.name, codemaker.name, params.n, params.k,
        transcript.query_count, transcript.won,
    )
    return transcript


def statelessness_check(
    strategy_factory: Callable[[], Strategy],
    transcript: GameTranscript,
    stream: RandomStream,
) -> bool:
    """Replay every step with a fresh strategy and the recorded memory.

    True iff each regenerated guess, and each regenerated selection that led
    to the next recorded memory, matches the transcript.
    """
    for step, (record, memory) in enumerate(zip(transcript.queries, transcript.memories)):
        rng = step_generator(stream, step)
        strategy = strategy_factory()
        if strategy.propose(memory, rng) != record.guess:
            _log.info("step %d: regenerated guess differs", step)
            return False
        if step + 1 < len(transcript.memories):
            selected = strategy.select(memory, record.guess, record.black, rng)
            if selected != transcript.memories[step + 1]:
                _log.info("step %d: regenerated selection differs", step)
                return False
    return True


def one_max_view(z: Sequence[int]) -> Callable[[Sequence[int]], int]:
    """The fitness function ``x -> eq(z, x)``."""
    target = tuple(z)

    def fitness(x: Sequence[int]) -> int:
        return eq(target, x)

    return fitness
