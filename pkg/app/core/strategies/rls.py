"""Randomized local search with a single memory cell."""

from __future__ import annotations

import numpy as np

from app.core.game import CodeString, random_code
from app.core.harness import MemoryState, Strategy


class RlsStrategy(Strategy):
    """Recolor one uniformly chosen position; keep the new string unless it is worse."""

    name = "rls"

    def propose(self, memory: MemoryState, rng: np.random.Generator) -> CodeString:
        if not memory.pairs:
            return random_code(self.params, rng)
        x, _ = memory.pairs[0]
        position = int(rng.integers(self.params.n))
        shift = int(rng.integers(1, self.params.k))
        y = list(x)
        y[position] = (y[position] + shift) % self.params.k
        return tuple(y)

    def select(
        self,
        memory: MemoryState,
        guess: CodeString,
        black: int,
        rng: np.random.Generator,
    ) -> MemoryState:
        if memory.pairs and memory.pairs[0][1] > black:
            return memory.holding(memory.pairs[0])
        return memory.holding((guess, black))

    def phase(self, memory: MemoryState) -> str:
        return "phase1" if memory.pairs else "phase0"
