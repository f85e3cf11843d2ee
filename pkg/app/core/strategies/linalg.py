"""Linear-time position fixing driven by the tail number.

The stored string ``x`` agrees with the secret before ``tn(x)`` and is
constant from ``tn(x)`` on.  Each step either tests position ``tn(x)``
alone or changes the whole tail; in both cases one answer decides whether the
guess is kept, and a kept guess moves ``tn`` one step to the right (or, for
k >= 3, re-marks the tail).
"""

from __future__ import annotations

from collections.abc import Sequence
from enum import Enum
from typing import TYPE_CHECKING

import numpy as np

from app.core.codec import tail_number
from app.core.errors import ContractViolationError
from app.core.game import CodeString

if TYPE_CHECKING:
    from app.core.harness import GameTranscript


class LinAlgMove(str, Enum):
    FLIP_POSITION = "flip-position"
    FLIP_TAIL = "flip-tail"
    RECOLOR_POSITION = "recolor-position"
    REMARK_TAIL = "remark-tail"


def linalg_step_k2(x: CodeString, rng: np.random.Generator) -> tuple[CodeString, LinAlgMove]:
    tn = tail_number(x)
    if rng.random() < 0.5:
        return x[: tn - 1] + (1 - x[tn - 1],) + x[tn:], LinAlgMove.FLIP_POSITION
    return x[:tn] + tuple(1 - c for c in x[tn:]), LinAlgMove.FLIP_TAIL


def linalg_step_k3(
    x: CodeString, k: int, rng: np.random.Generator
) -> tuple[CodeString, LinAlgMove]:
    tn = tail_number(x)
    current = x[tn - 1]
    if int(rng.integers(k)) != 0:
        j = (current + int(rng.integers(1, k))) % k
        return x[: tn - 1] + (j,) + x[tn:], LinAlgMove.RECOLOR_POSITION
    # Only the fixed neighbour is banned, so tn never moves left; j == current re-asks x.
    choices = [c for c in range(k) if tn == 1 or c != x[tn - 2]]
    j = choices[int(rng.integers(len(choices)))]
    return x[: tn - 1] + (j,) * (len(x) - tn + 1), LinAlgMove.REMARK_TAIL


def linalg_step(x: CodeString, k: int, rng: np.random.Generator) -> tuple[CodeString, LinAlgMove]:
    if k == 2:
        return linalg_step_k2(x, rng)
    return linalg_step_k3(x, k, rng)


def classify_linalg_move(x: Sequence[int], y: Sequence[int], k: int) -> LinAlgMove:
    """Recover which move produced ``y`` from ``x``."""
    tn = tail_number(x)
    if len(x) != len(y) or tuple(x[: tn - 1]) != tuple(y[: tn - 1]):
        raise ContractViolationError("guess changed positions that were already fixed")
    single = tuple(y[tn:]) == tuple(x[tn:]) and y[tn - 1] != x[tn - 1]
    if single:
        return LinAlgMove.FLIP_POSITION if k == 2 else LinAlgMove.RECOLOR_POSITION
    if k == 2 and y[tn - 1] == x[tn - 1] and all(a != b for a, b in zip(x[tn:], y[tn:])):
        return LinAlgMove.FLIP_TAIL
    if k > 2 and len(set(y[tn - 1 :])) == 1:
        return LinAlgMove.REMARK_TAIL
    raise ContractViolationError("guess is not a tail-number move")


def linalg_keeps(x: Sequence[int], x_black: int, y: Sequence[int], y_black: int, k: int) -> bool:
    move = classify_linalg_move(x, y, k)
    if move is LinAlgMove.FLIP_TAIL:
        return x_black + y_black == len(x) + tail_number(x)
    if move is LinAlgMove.REMARK_TAIL:
        return True
    return y_black > x_black


def linalg_calls_per_position(transcript: GameTranscript) -> float:
    """Mean number of tail-number guesses spent per fixed position.

    A step counts when both the stored string and the guess end in
    a constant tail strictly before ``n - 1``; a position counts as fixed when
    the following memory has a larger tail number.
    """
    n = transcript.params.n
    calls = 0
    advanced = 0
    for step, (record, memory) in enumerate(zip(transcript.queries, transcript.memories)):
        if len(memory) != 1:
            continue
        x = memory.pairs[0][0]
        if x[-1] != x[-2] or record.guess[-1] != record.guess[-2]:
            continue
        tn = tail_number(x)
        if tn > n - 2:
            continue
        calls += 1
        if step + 1 < len(transcript.memories):
            following = transcript.memories[step + 1]
            if tail_number(following.pairs[0][0]) > tn:
                advanced += 1
        elif record.black == n:
            advanced += 1
    return calls / advanced if advanced else float("nan")
