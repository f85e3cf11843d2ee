"""Terminal game with a human codemaker.

The human keeps a secret in mind and types the black-peg count for each
guess.  Answers outside ``0..n`` are re-prompted.  When ``k**n`` fits the
enumeration budget every answer is checked against the consistent set, so a
contradiction is caught on the answer that causes it.
"""

from __future__ import annotations

import logging
from collections.abc import Callable

from app.core.codemakers import Codemaker
from app.core.consistent import consistent_matrix, enumeration_budget
from app.core.errors import ArgumentError, InconsistentAnswersError, LayoutCorruptionError
from app.core.game import Answer, CodeString, GameParams, code_to_text
from app.core.harness import run_game
from app.core.randomness import RandomStream
from app.core.strategies import build_strategy, resolve_mu

_log = logging.getLogger(__name__)

InputFn = Callable[[str], str]
OutputFn = Callable[[str], None]

EXIT_WON = 0
EXIT_CAP = 1
EXIT_INCONSISTENT = 2


class InteractiveCodemaker(Codemaker):
    name = "interactive"

    def __init__(
        self,
        params: GameParams,
        *,
        input_fn: InputFn = input,
        output_fn: OutputFn = print,
        budget: int | None = None,
    ) -> None:
        super().__init__(params)
        self._input = input_fn
        self._output = output_fn
        self._history: list[tuple[CodeString, int]] = []
        self._won: CodeString | None = None
        limit = enumeration_budget() if budget is None else budget
        self.checks_consistency = params.code_count <= limit
        self._budget = limit

    @property
    def history(self) -> list[tuple[CodeString, int]]:
        return list(self._history)

    def _read_black(self) -> int:
        n = self.params.n
        while True:
            try:
                raw = self._input(f"black pegs (0..{n}): ")
            except EOFError as exc:
                raise ArgumentError("input closed before the game ended") from exc
            try:
                black = int(raw.strip())
            except ValueError:
                self._output(f"not a number: {raw.strip()!r}")
                continue
            if 0 <= black <= n:
                return black
            self._output(f"answer must be between 0 and {n}")

    def answer(self, guess: CodeString) -> Answer:
        step = len(self._history) + 1
        self._output(f"guess {step}: {code_to_text(guess, self.params.k)}")
        black = self._read_black()
        self._history.append((guess, black))
        if black == self.params.n:
            self._won = guess
        elif self.checks_consistency:
            rows = consistent_matrix(
                self._history, self.params.n, self.params.k, budget=self._budget
            )
            if rows.shape[0] == 0:
                raise InconsistentAnswersError(
                    f"no code agrees with all {len(self._history)} answers",
                    [(code_to_text(x, self.params.k), b) for x, b in self._history],
                )
        return Answer(black, length=self.params.n)

    @property
    def secret(self) -> CodeString | None:
        return self._won


def interactive_game(
    strategy_name: str,
    params: GameParams,
    mu: int | None = None,
    *,
    seed: int,
    query_cap: int,
    input_fn: InputFn = input,
    output_fn: OutputFn = print,
    budget: int | None = None,
    epsilon: float | None = None,
    big_k: float | None = None,
    block_size: int | None = None,
    samples: int | None = None,
) -> int:
    """Play one game at the terminal; returns 0 on a win, 1 at the cap, 2 on a contradiction."""
    strategy = build_strategy(
        strategy_name,
        params,
        epsilon=epsilon,
        big_k=big_k,
        block_size=block_size,
        samples=samples,
        budget=budget,
    )
    memory_size = resolve_mu(strategy_name, strategy, mu)
    codemaker = InteractiveCodemaker(params, input_fn=input_fn, output_fn=output_fn, budget=budget)
    output_fn(
        f"{strategy_name} (mu={memory_size}) guesses a code of length {params.n} "
        f"over colors 0..{params.k - 1}."
    )
    if not codemaker.checks_consistency:
        output_fn("answers are not checked for consistency at this size")
    try:
        transcript = run_game(
            strategy, codemaker, params, memory_size, query_cap, RandomStream(seed)
        )
    except InconsistentAnswersError as exc:
        output_fn(f"inconsistent answers: {exc}")
        for text, black in exc.constraints:
            output_fn(f"  {text} -> {black}")
        _log.info("interactive game aborted after %d answers", len(exc.constraints))
        return EXIT_INCONSISTENT
    except LayoutCorruptionError as exc:
        # Unchecked sizes: contradictory answers surface as undecodable memory.
        output_fn(f"inconsistent answers: {exc}")
        for guess, black in codemaker.history:
            output_fn(f"  {code_to_text(guess, params.k)} -> {black}")
        return EXIT_INCONSISTENT
    if transcript.won:
        output_fn(f"solved in {transcript.query_count} guesses")
        return EXIT_WON
    output_fn(f"no win within {query_cap} guesses")
    return EXIT_CAP
