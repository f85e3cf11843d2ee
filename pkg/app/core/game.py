"""Game core: code strings, answers and the black/white peg oracles.

Colors are ``0..k-1``.  A code string is a plain ``tuple[int, ...]``; the
same type is used for guesses, secrets and the shorter fragments the encoding
strategies cut out of them.
"""

from __future__ import annotations

from collections import Counter
from collections.abc import Sequence
from dataclasses import dataclass, field

import numpy as np

from app.core.errors import ArgumentError

CodeString = tuple[int, ...]


@dataclass(frozen=True, slots=True)
class GameParams:
    n: int
    k: int

    def __post_init__(self) -> None:
        if self.n < 1:
            raise ArgumentError(f"n must be at least 1, got {self.n}")
        if self.k < 2:
            raise ArgumentError(f"k must be at least 2, got {self.k}")

    @property
    def code_count(self) -> int:
        return self.k**self.n


@dataclass(frozen=True, slots=True)
class Answer:
    """Peg counts for one guess; ``length`` (the code length) enables the range checks."""

    black: int
    white: int | None = None
    length: int | None = field(default=None, compare=False, repr=False)

    def __post_init__(self) -> None:
        if self.black < 0:
            raise ArgumentError(f"black count must be non-negative, got {self.black}")
        if self.white is not None and self.white < 0:
            raise ArgumentError(f"white count must be non-negative, got {self.white}")
        if self.length is None:
            return
        if self.black + (self.white or 0) > self.length:
            raise ArgumentError(
                f"black {self.black} + white {self.white or 0} exceed the length {self.length}"
            )
        if self.black == self.length and self.white:
            raise ArgumentError(f"a full match leaves no white pegs, got {self.white}")


def _check_lengths(z: Sequence[int], x: Sequence[int]) -> None:
    if len(z) != len(x):
        raise ArgumentError(f"length mismatch: {len(z)} != {len(x)}")


def eq(z: Sequence[int], x: Sequence[int]) -> int:
    """Number of positions in which ``z`` and ``x`` agree (black pegs)."""
    _check_lengths(z, x)
    return sum(1 for a, b in zip(z, x) if a == b)


def white_pegs(z: Sequence[int], x: Sequence[int]) -> int:
    """Right colors in wrong positions, via the multiset formula."""
    _check_lengths(z, x)
    cz, cx = Counter(z), Counter(x)
    shared = sum(min(count, cx[color]) for color, count in cz.items())
    return shared - eq(z, x)


def score(z: Sequence[int], x: Sequence[int], *, with_white: bool = False) -> Answer:
    black = eq(z, x)
    return Answer(black, white_pegs(z, x) if with_white else None, len(z))


def validate_code(x: Sequence[int], params: GameParams) -> CodeString:
    """Return ``x`` as a tuple after checking its length and colors."""
    code = tuple(int(c) for c in x)
    if len(code) != params.n:
        raise ArgumentError(f"code has length {len(code)}, expected {params.n}")
    for c in code:
        if not 0 <= c < params.k:
            raise ArgumentError(f"color {c} outside [0..{params.k - 1}]")
    return code


def random_code(params: GameParams, rng: np.random.Generator) -> CodeString:
    """Uniform random code string; entries are independent."""
    return tuple(int(c) for c in rng.integers(0, params.k, size=params.n))


def complement(x: Sequence[int]) -> CodeString:
    """Binary complement (k=2 only)."""
    return tuple(1 - c for c in x)


# ── Text form ─────────────────────────────────────────────────────────────


def code_to_text(x: Sequence[int], k: int) -> str:
    if k <= 10:
        return "".join(str(c) for c in x)
    return ",".join(str(c) for c in x)


def code_from_text(text: str, params: GameParams) -> CodeString:
    cleaned = text.strip()
    if params.k > 10 or "," in cleaned:
        parts = [p for p in cleaned.split(",") if p.strip()]
    else:
        parts = list(cleaned)
    try:
        values = [int(p) for p in parts]
    except ValueError as exc:
        raise ArgumentError(f"not a code string: {text!r}") from exc
    return validate_code(values, params)
