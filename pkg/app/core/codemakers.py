"""Codemakers: the answering side of the game.

``FixedCodemaker`` and ``RandomCodemaker`` answer from one immutable secret.
``DevilCodemaker`` never commits: it keeps every code still consistent with
its answers and picks the answer that leaves the most of them alive.
``TailAdversary`` keeps a code but reshuffles its undecided tail so the
tail-number moves fail as often as the answers allow.
"""

from __future__ import annotations

import logging
from abc import ABC, abstractmethod
from collections.abc import Sequence

import numpy as np

from app.core.codec import tail_number
from app.core.config import load_config, section
from app.core.consistent import candidate_matrix
from app.core.errors import ArgumentError, EnumerationBudgetError
from app.core.game import Answer, CodeString, GameParams, eq, random_code, validate_code

_log = logging.getLogger(__name__)


class Codemaker(ABC):
    """One instance per game; not thread-safe."""

    name: str = "codemaker"

    def __init__(self, params: GameParams) -> None:
        self.params = params

    @abstractmethod
    def answer(self, guess: CodeString) -> Answer: ...

    @property
    @abstractmethod
    def secret(self) -> CodeString | None:
        """The committed code, or ``None`` while it is not yet determined."""


class FixedCodemaker(Codemaker):
    name = "fixed"

    def __init__(self, params: GameParams, secret: Sequence[int]) -> None:
        super().__init__(params)
        self._secret = validate_code(secret, params)

    def answer(self, guess: CodeString) -> Answer:
        return Answer(eq(self._secret, guess), length=self.params.n)

    @property
    def secret(self) -> CodeString:
        return self._secret


class RandomCodemaker(FixedCodemaker):
    name = "random"

    def __init__(self, params: GameParams, rng: np.random.Generator) -> None:
        super().__init__(params, random_code(params, rng))


def devil_max_codes() -> int:
    return int(section("game", load_config())["devil_max_codes"])


class DevilCodemaker(Codemaker):
    name = "devil"

    def __init__(self, params: GameParams, *, max_codes: int | None = None) -> None:
        super().__init__(params)
        limit = devil_max_codes() if max_codes is None else max_codes
        if params.code_count > limit:
            raise EnumerationBudgetError(
                f"devil needs all {params.k}^{params.n} codes, above its cap of {limit}",
            )
        self._consistent = candidate_matrix(params.k, params.n)

    @property
    def consistent_count(self) -> int:
        return int(self._consistent.shape[0])

    def consistent_codes(self) -> tuple[CodeString, ...]:
        return tuple(tuple(int(c) for c in row) for row in self._consistent)

    def answer(self, guess: CodeString) -> Answer:
        target = np.asarray(guess, dtype=np.uint8)
        matches = np.count_nonzero(self._consistent == target, axis=1)
        classes = np.bincount(matches, minlength=self.params.n + 1)
        # argmax takes the first maximum, i.e. the smaller eq on ties.
        black = int(np.argmax(classes))
        self._consistent = self._consistent[matches == black]
        _log.debug("devil answered %d, %d codes remain", black, self.consistent_count)
        return Answer(black, length=self.params.n)

    @property
    def secret(self) -> CodeString | None:
        if self.consistent_count == 1:
            return tuple(int(c) for c in self._consistent[0])
        return None


class TailAdversary(Codemaker):
    """Two-color answerer that fails every first tail-number guess at a position.

    A guess ``y`` with constant tail from ``tn(y)`` tests position
    ``p = tn(y) - 1``; it is kept iff ``z_p == y_p``.  On the first guess at a
    new position the adversary makes ``z_p`` differ from ``y_p`` by swapping it
    with a later position of the other color.  Against the tail-number moves
    every earlier guess was constant from ``p`` on, so the swap leaves all
    earlier answers unchanged; other guessers get no such guarantee.
    """

    name = "tail-adversary"

    def __init__(self, params: GameParams, rng: np.random.Generator) -> None:
        super().__init__(params)
        if params.k != 2:
            raise ArgumentError(f"tail adversary plays two colors, not k={params.k}")
        self._z = list(random_code(params, rng))
        self._frontier = 0
        self.swaps = 0

    def answer(self, guess: CodeString) -> Answer:
        p = tail_number(guess) - 1
        if p > self._frontier:
            self._frontier = p
            if self._z[p - 1] == guess[p - 1]:
                later = [q for q in range(p, self.params.n) if self._z[q] != self._z[p - 1]]
                if later:
                    q = later[0]
                    self._z[p - 1], self._z[q] = self._z[q], self._z[p - 1]
                    self.swaps += 1
        return Answer(eq(self._z, guess), length=self.params.n)

    @property
    def secret(self) -> CodeString:
        """Current code; consistent with every answer given so far."""
        return tuple(self._z)
