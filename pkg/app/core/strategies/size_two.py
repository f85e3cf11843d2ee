"""Block-wise random guessing with two memory cells.

One cell holds the sampling string ``y`` (last position 0): the blocks before
the current one are already solved in it, the current block carries the latest
variant, the rest is still 0.  The other holds the storage string ``x`` (last
position 1): the current block index followed by one record per variant,
``[fragment | answer | 1]``.

Per block the records are the k references (the constant fragments
``0..0, 1..1, ...``; the first one is ``y`` itself), then ``t`` random
fragments.  References cancel the unknown off-block part of every answer, so
each record yields the exact number of on-block matches.  A uniform consistent
fragment is guessed first; after a miss the rejected guess stays in ``y`` and
the next guess is the first consistent fragment after it (lexicographically,
wrapping around) that also agrees with the miss, so a block takes at most as
many guesses as it has consistent fragments.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from enum import Enum

import numpy as np

from app.core.codec import (
    LayoutKind,
    LayoutParams,
    binary_decode,
    binary_encode,
    block_index_size_two,
    block_of,
    part_flag,
    query_count_size_two,
    size_two_layout,
    storage_requirement,
    substitute_block,
)
from app.core.consistent import next_consistent, sample_consistent
from app.core.errors import ArgumentError, InfeasibleLayoutError, LayoutCorruptionError
from app.core.game import CodeString, GameParams
from app.core.harness import MemoryState, Pair, Strategy

_log = logging.getLogger(__name__)


class SizeTwoMove(str, Enum):
    SETUP_SAMPLING = "setup-sampling"
    SETUP_STORAGE = "setup-storage"
    OPEN_BLOCK = "open-block"
    REFERENCE = "reference"
    SAMPLE = "sample"
    STORE = "store"
    RESOLVE = "resolve"
    LAST_POSITION = "last-position"


@dataclass(frozen=True, slots=True)
class SizeTwoHistory:
    """Records of the current block, decoded from a storage string."""

    block: int
    references: tuple[int, ...]
    samples: tuple[tuple[CodeString, int], ...]

    def evidence(self, block_len: int, k: int) -> tuple[tuple[CodeString, int], ...]:
        """``(fragment, on-block matches)`` for references and samples alike."""
        refs = [((c,) * block_len, self.references[c]) for c in range(k)]
        return tuple(
            (fragment, delta_contribution(answer, self.references, block_len, k))
            for fragment, answer in refs + list(self.samples)
        )


def delta_contribution(
    answer: int, reference_answers: tuple[int, ...] | list[int], block_len: int, k: int
) -> int:
    """On-block matches of a variant, given the answers of the k references."""
    if len(reference_answers) != k:
        raise ArgumentError(f"need {k} reference answers, got {len(reference_answers)}")
    off_block, rest = divmod(sum(reference_answers) - block_len, k)
    if rest:
        raise LayoutCorruptionError("reference answers do not split evenly across colors")
    delta = answer - off_block
    if not 0 <= delta <= block_len:
        raise LayoutCorruptionError(f"block contribution {delta} outside [0..{block_len}]")
    return delta


def write_record(
    x: CodeString,
    layout: LayoutParams,
    block: int,
    slot: int,
    fragment: CodeString,
    answer: int,
) -> CodeString:
    width = layout.record_width(block)
    start = layout.ell_n + slot * width
    if start + width > layout.n - 1:
        raise LayoutCorruptionError(f"record {slot} of block {block} overruns the storage string")
    record = tuple(fragment) + binary_encode(answer, layout.ell_n) + (1,)
    return x[:start] + record + x[start + width :]


def open_block(y: CodeString, y_answer: int, block: int, layout: LayoutParams) -> CodeString:
    """Fresh storage string for ``block`` whose first record is ``y`` itself."""
    blank = binary_encode(block, layout.ell_n) + (0,) * (layout.n - 1 - layout.ell_n) + (1,)
    return write_record(blank, layout, block, 0, block_of(y, block, layout), y_answer)


def reconstruct_history_size_two(x: CodeString, layout: LayoutParams) -> SizeTwoHistory:
    block = block_index_size_two(x, layout)
    q = query_count_size_two(x, layout)
    if block == 0:
        return SizeTwoHistory(0, (), ())
    size = layout.block(block).size
    width = layout.record_width(block)
    references: list[int] = []
    samples: list[tuple[CodeString, int]] = []
    for slot in range(q):
        start = layout.ell_n + slot * width
        fragment = tuple(x[start : start + size])
        answer = binary_decode(x[start + size : start + size + layout.ell_n])
        if x[start + width - 1] != 1:
            raise LayoutCorruptionError(f"record {slot} has no end marker")
        if slot < layout.k:
            if fragment != (slot,) * size:
                raise LayoutCorruptionError(f"reference record {slot} is not constant {slot}")
            references.append(answer)
        else:
            samples.append((fragment, answer))
    return SizeTwoHistory(block, tuple(references), tuple(samples))


@dataclass(frozen=True, slots=True)
class SizeTwoView:
    sampling: Pair
    storage: Pair
    history: SizeTwoHistory
    q: int


class SizeTwoStrategy(Strategy):
    name = "size-two"

    def __init__(self, params: GameParams, layout: LayoutParams | None = None) -> None:
        super().__init__(params)
        self.layout = layout or size_two_layout(params.n, params.k)
        if self.layout.kind is not LayoutKind.SIZE_TWO:
            raise ArgumentError("size-two strategy needs a size-two layout")
        if (self.layout.n, self.layout.k) != (params.n, params.k):
            raise ArgumentError("layout was built for a different game")
        if self.layout.s <= self.layout.k or storage_requirement(self.layout) > params.n:
            raise InfeasibleLayoutError(
                f"size-two layout (s={self.layout.s}, t={self.layout.t}) does not fit n={params.n}"
            )

    # ── decoding ──

    def view(self, memory: MemoryState) -> SizeTwoView:
        sampling = [p for p in memory.pairs if p[0][-1] == 0]
        storage = [p for p in memory.pairs if p[0][-1] == 1]
        if len(sampling) != 1 or len(storage) != 1:
            raise LayoutCorruptionError("memory must hold one sampling and one storage string")
        x = storage[0][0]
        history = reconstruct_history_size_two(x, self.layout)
        return SizeTwoView(sampling[0], storage[0], history, query_count_size_two(x, self.layout))

    def plan(self, memory: MemoryState) -> SizeTwoMove:
        if len(memory) == 0:
            return SizeTwoMove.SETUP_SAMPLING
        if len(memory) == 1:
            return SizeTwoMove.SETUP_STORAGE
        v = self.view(memory)
        block = v.history.block
        layout = self.layout
        if block == 0:
            if v.storage[0] != (0,) * (layout.n - 1) + (1,):
                raise LayoutCorruptionError("storage string without a block index is not blank")
            return SizeTwoMove.OPEN_BLOCK
        if block > layout.block_count:
            raise LayoutCorruptionError(f"block index {block} beyond {layout.block_count}")
        size = layout.block(block).size
        if v.q >= layout.k:
            y, y_answer = v.sampling
            if delta_contribution(y_answer, v.history.references, size, layout.k) == size:
                if block < layout.block_count:
                    return SizeTwoMove.OPEN_BLOCK
                return SizeTwoMove.LAST_POSITION
        if part_flag(v.sampling[0], v.sampling[1], v.storage[0], layout) == 0:
            # a full storage string means y is a rejected consistent guess
            if v.q >= layout.t + layout.k:
                return SizeTwoMove.RESOLVE
            return SizeTwoMove.STORE
        if v.q < layout.k:
            return SizeTwoMove.REFERENCE
        if v.q < layout.t + layout.k:
            return SizeTwoMove.SAMPLE
        return SizeTwoMove.RESOLVE

    # ── strategy contract ──

    def propose(self, memory: MemoryState, rng: np.random.Generator) -> CodeString:
        n, k = self.params.n, self.params.k
        move = self.plan(memory)
        if move is SizeTwoMove.SETUP_SAMPLING:
            return (0,) * n
        if move is SizeTwoMove.SETUP_STORAGE:
            return (0,) * (n - 1) + (1,)

        v = self.view(memory)
        (y, y_answer), (x, _) = v.sampling, v.storage
        block = v.history.block
        if move is SizeTwoMove.OPEN_BLOCK:
            _log.debug("size-two: opening block %d", block + 1)
            return open_block(y, y_answer, block + 1, self.layout)
        if move is SizeTwoMove.LAST_POSITION:
            last = (y[-1] + int(rng.integers(1, k))) % k
            return y[:-1] + (last,)

        span = self.layout.block(block)
        if move is SizeTwoMove.REFERENCE:
            return substitute_block(y, span, (v.q,) * span.size)
        if move is SizeTwoMove.SAMPLE:
            fragment = tuple(int(c) for c in rng.integers(0, k, size=span.size))
            return substitute_block(y, span, fragment)
        if move is SizeTwoMove.STORE:
            return write_record(x, self.layout, block, v.q, block_of(y, block, self.layout), y_answer)

        evidence = v.history.evidence(span.size, k)
        if part_flag(y, y_answer, x, self.layout) == 1:
            fragment, size = sample_consistent(evidence, span.size, k, rng)
        else:
            rejected = block_of(y, block, self.layout)
            delta = delta_contribution(y_answer, v.history.references, span.size, k)
            fragment, size = next_consistent(
                evidence, span.size, k, rejected, [(rejected, delta)]
            )
        if size == 0:
            raise LayoutCorruptionError(f"no fragment of block {block} fits the stored evidence")
        return substitute_block(y, span, fragment)

    def select(
        self,
        memory: MemoryState,
        guess: CodeString,
        black: int,
        rng: np.random.Generator,
    ) -> MemoryState:
        move = self.plan(memory)
        new: Pair = (guess, black)
        if move is SizeTwoMove.SETUP_SAMPLING:
            return memory.holding(new)
        if move is SizeTwoMove.SETUP_STORAGE:
            return memory.holding(memory.pairs[0], new)

        v = self.view(memory)
        if move in (SizeTwoMove.OPEN_BLOCK, SizeTwoMove.STORE):
            return memory.holding(v.sampling, new)
        if move in (SizeTwoMove.REFERENCE, SizeTwoMove.SAMPLE):
            return memory.holding(new, v.storage)
        if move is SizeTwoMove.RESOLVE:
            # rejected guesses stay in y so the next one continues after them
            return memory.holding(new, v.storage)
        return memory.holding(v.sampling, v.storage)

    def phase(self, memory: MemoryState) -> str:
        move = self.plan(memory)
        if move in (SizeTwoMove.SETUP_SAMPLING, SizeTwoMove.SETUP_STORAGE):
            return "phase0"
        if move is SizeTwoMove.LAST_POSITION:
            return "phase3"
        return "phase1"
