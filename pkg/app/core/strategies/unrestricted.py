"""Random guessing followed by resolution over the full consistent set.

Needs memory for every guess it has made, so it is the baseline rather than a
memory-restricted contender.  The first ``t`` pairs in memory are the random
samples; anything after them is a rejected resolution guess.  Resolution starts
at a uniform consistent code and then steps to the next consistent code after
the latest rejection (lexicographically, wrapping around), so no code is guessed
twice and at most ``|S|`` resolution guesses are made.  That only needs the
latest rejection, so memory of ``t + 1`` pairs is enough.
"""

from __future__ import annotations

import logging

import numpy as np

from app.core.config import load_config, section
from app.core.consistent import (
    check_budget,
    consistent_sample_count,
    next_consistent,
    sample_consistent,
)
from app.core.errors import ArgumentError, InconsistentAnswersError
from app.core.game import CodeString, GameParams, random_code
from app.core.harness import MemoryState, Strategy

_log = logging.getLogger(__name__)


class UnrestrictedStrategy(Strategy):
    name = "unrestricted"

    def __init__(
        self,
        params: GameParams,
        *,
        epsilon: float | None = None,
        samples: int | None = None,
        budget: int | None = None,
    ) -> None:
        super().__init__(params)
        check_budget(params.k, params.n, budget)
        self.budget = budget
        if samples is not None:
            self.t = samples
        elif params.n > params.k:
            eps = float(section("layout", load_config())["epsilon"] if epsilon is None else epsilon)
            self.t = consistent_sample_count(params.n, params.k, eps)
        else:
            self.t = 0

    def required_capacity(self) -> int:
        return self.t + 1

    def default_capacity(self) -> int:
        """Room for the samples and every code of the game."""
        return self.t + self.params.k**self.params.n

    def propose(self, memory: MemoryState, rng: np.random.Generator) -> CodeString:
        if memory.capacity < self.required_capacity():
            raise ArgumentError(
                f"unrestricted guessing needs memory for {self.required_capacity()} pairs"
            )
        if len(memory) < self.t:
            return random_code(self.params, rng)
        n, k = self.params.n, self.params.k
        samples, rejected = memory.pairs[: self.t], memory.pairs[self.t :]
        if rejected:
            guess, size = next_consistent(
                samples, n, k, rejected[-1][0], rejected, budget=self.budget
            )
        else:
            guess, size = sample_consistent(samples, n, k, rng, budget=self.budget)
        if size == 0:
            raise InconsistentAnswersError(
                "no code agrees with the stored answers",
                [("".join(map(str, x)), black) for x, black in memory.pairs],
            )
        _log.debug("unrestricted: %d consistent codes left", size)
        return guess

    def select(
        self,
        memory: MemoryState,
        guess: CodeString,
        black: int,
        rng: np.random.Generator,
    ) -> MemoryState:
        pairs = list(memory.pairs) + [(guess, black)]
        if len(pairs) > memory.capacity:
            # drop the oldest rejection; samples and the latest rejection stay
            del pairs[self.t]
        return memory.holding(*pairs)

    def phase(self, memory: MemoryState) -> str:
        return "phase1" if len(memory) < self.t else "phase2"
