from __future__ import annotations

import pytest

from app.core.errors import ArgumentError
from app.core.game import GameParams, code_from_text, eq
from app.core.interactive import (
    EXIT_CAP,
    EXIT_INCONSISTENT,
    EXIT_WON,
    InteractiveCodemaker,
    interactive_game,
)


class Terminal:
    """Plays the human: answers honestly for ``secret`` after any scripted replies."""

    def __init__(self, secret: str | None, params: GameParams, script: tuple[str, ...] = ()) -> None:
        self.params = params
        self.secret = None if secret is None else code_from_text(secret, params)
        self.script = list(script)
        self.lines: list[str] = []
        self.prompts = 0

    def output(self, line: str) -> None:
        self.lines.append(line)

    def input(self, prompt: str) -> str:
        self.prompts += 1
        if self.script:
            return self.script.pop(0)
        if self.secret is None:
            raise EOFError
        guess_line = next(line for line in reversed(self.lines) if line.startswith("guess "))
        guess = code_from_text(guess_line.split(": ", 1)[1], self.params)
        return str(eq(self.secret, guess))


def _play(name: str, terminal: Terminal, **kwargs) -> int:
    kwargs.setdefault("query_cap", 50 * terminal.params.n)
    return interactive_game(
        name,
        terminal.params,
        seed=11,
        input_fn=terminal.input,
        output_fn=terminal.output,
        **kwargs,
    )


def test_honest_answers_lead_to_a_win() -> None:
    params = GameParams(10, 2)
    terminal = Terminal("1101001110", params)
    assert _play("size-one", terminal) == EXIT_WON
    assert terminal.lines[0].startswith("size-one (mu=1)")
    assert terminal.lines[-1].startswith("solved in ")


def test_bad_answers_are_prompted_again() -> None:
    params = GameParams(4, 2)
    terminal = Terminal("1011", params, script=("abc", "7"))
    assert _play("rls", terminal) == EXIT_WON
    assert "not a number: 'abc'" in terminal.lines
    assert "answer must be between 0 and 4" in terminal.lines


def test_contradictions_end_the_game() -> None:
    params = GameParams(4, 2)
    terminal = Terminal(None, params, script=("0",) * 10)
    assert _play("rls", terminal) == EXIT_INCONSISTENT
    assert any(line.startswith("inconsistent answers") for line in terminal.lines)
    assert terminal.prompts == 2


def test_query_cap_ends_the_game() -> None:
    params = GameParams(4, 2)
    terminal = Terminal(None, params, script=("0",))
    assert _play("rls", terminal, query_cap=1) == EXIT_CAP
    assert terminal.lines[-1] == "no win within 1 guesses"


def test_closed_input_is_an_error() -> None:
    params = GameParams(4, 2)
    with pytest.raises(ArgumentError):
        _play("rls", Terminal(None, params))


def test_large_games_are_not_checked() -> None:
    codemaker = InteractiveCodemaker(GameParams(10, 2), budget=100)
    assert not codemaker.checks_consistency
    assert codemaker.secret is None
    assert InteractiveCodemaker(GameParams(6, 2), budget=100).checks_consistency
