"""Block-wise random guessing with a single memory cell.

The one stored string carries everything: which phase the game is in, the
solved prefix, a copy of the first ``l`` secret positions, the answers of the
reference variants and every (fragment, contribution) record of the current
block.  Field map (1-based)::

    1            flag: 0 on storage strings, 1 on variants
    2..l         answer field: a variant carries the answer of the string it came from
    l+1..l+bs    blocks; block i is being sampled, blocks < i are solved
    l+bs+1..2l+bs  copy of the secret's first l positions
    storage      k-1 reference records, then sample records
    counter      index of the current block
    n-1, n       0 1 while blocks are sampled, a constant pair otherwise

Storage strings and variants alternate.  A variant is its storage string with the
head replaced by ``[1 | binary(answer)]`` and the current block replaced by a
constant reference fragment or a random one.  The variant's answer minus the
storage string's answer isolates the head and block changes; the head part is
known because the prefix copy equals the secret there, and the block part of
the all-zero block follows from the reference variants.  The next storage string
writes the result into a new record.

Outside the sampling phase positions are fixed one at a time by the
tail-number moves in :mod:`app.core.strategies.linalg`.
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
    block_index_size_one,
    block_of,
    query_count_size_one,
    size_one_layout,
    substitute_block,
    tail_number,
)
from app.core.consistent import sample_consistent
from app.core.errors import ArgumentError, LayoutCorruptionError
from app.core.game import CodeString, GameParams, eq
from app.core.harness import MemoryState, Strategy
from app.core.strategies.linalg import linalg_keeps, linalg_step

_log = logging.getLogger(__name__)


class SizeOnePhase(str, Enum):
    INIT = "init"
    PHASE0 = "phase0-linalg"
    INTERMEDIATE = "intermediate"
    SAMPLING = "phase1-sampling"
    OPTIMIZE = "phase1-optimize"
    PREP = "phase2-prep"
    PHASE2 = "phase2-linalg"
    ENDGAME = "phase3-endgame"


class SizeOneStep(str, Enum):
    REFERENCE_VARIANT = "reference-variant"
    ADD_REFERENCE = "add-reference"
    SAMPLE_VARIANT = "sample-variant"
    ADD_SAMPLE = "add-sample"
    RESOLVE = "resolve"
    UPDATE = "update"


_ACCOUNTING = {
    SizeOnePhase.INIT: "phase0",
    SizeOnePhase.PHASE0: "phase0",
    SizeOnePhase.INTERMEDIATE: "phase1",
    SizeOnePhase.SAMPLING: "phase1",
    SizeOnePhase.OPTIMIZE: "phase1",
    SizeOnePhase.PREP: "phase2",
    SizeOnePhase.PHASE2: "phase2",
    SizeOnePhase.ENDGAME: "phase3",
}


@dataclass(frozen=True, slots=True)
class SizeOneView:
    phase: SizeOnePhase
    step: SizeOneStep | None = None
    block: int = 0
    q: int = 0


@dataclass(frozen=True, slots=True)
class SampleRecord:
    store_answer: int
    fragment: CodeString
    delta: int


# ── Field helpers ─────────────────────────────────────────────────────────


def zero_head(layout: LayoutParams) -> CodeString:
    return (0,) * layout.ell


def variant_head(answer: int, layout: LayoutParams) -> CodeString:
    return (1,) + binary_encode(answer, layout.ell_n)


def head_contribution(x: CodeString, head: CodeString, layout: LayoutParams) -> int:
    """Matches of ``head`` against the secret's first positions, via the prefix copy."""
    return eq(x[layout.prefix_copy.slice], head)


def read_reference_records(x: CodeString, layout: LayoutParams, count: int) -> list[tuple[int, int]]:
    """``(storage answer, variant answer)`` of the first ``count`` reference records."""
    records: list[tuple[int, int]] = []
    width = layout.reference_record_width
    for slot in range(count):
        start = layout.storage_base + slot * width
        if x[start + width - 1] != 1:
            raise LayoutCorruptionError(f"reference record {slot} has no end marker")
        store_answer = binary_decode(x[start : start + layout.ell_n])
        variant_answer = binary_decode(x[start + layout.ell_n : start + 2 * layout.ell_n])
        records.append((store_answer, variant_answer))
    return records


def read_sample_records(x: CodeString, layout: LayoutParams, count: int) -> list[SampleRecord]:
    records: list[SampleRecord] = []
    width = layout.sample_record_width
    for slot in range(count):
        start = layout.reference_end + slot * width
        if x[start + width - 1] != 1:
            raise LayoutCorruptionError(f"sample record {slot} has no end marker")
        store_answer = binary_decode(x[start : start + layout.ell_n])
        frag_start = start + layout.ell_n
        fragment = tuple(x[frag_start : frag_start + layout.s])
        delta = binary_decode(x[frag_start + layout.s : frag_start + layout.s + layout.ell_s])
        records.append(SampleRecord(store_answer, fragment, delta))
    return records


def baseline_contribution(x: CodeString, layout: LayoutParams) -> int:
    """Matches of the all-zero fragment on the current block.

    Reference ``c`` gives the difference between color ``c`` and color 0 on
    the block; all k colors together cover the block exactly once.
    """
    k, s = layout.k, layout.s
    zero = head_contribution(x, zero_head(layout), layout)
    spread = 0
    for store_answer, variant_answer in read_reference_records(x, layout, k - 1):
        variant = variant_answer - head_contribution(x, variant_head(store_answer, layout), layout)
        spread += variant - (store_answer - zero)
    baseline, rest = divmod(s - spread, k)
    if rest or not 0 <= baseline <= s:
        raise LayoutCorruptionError("reference answers are inconsistent with the block size")
    return baseline


def variant_contribution(
    variant: CodeString, variant_answer: int, store_answer: int, layout: LayoutParams
) -> int:
    """On-block matches of the fragment in ``variant``.

    ``store_answer`` is the answer of the storage string the variant was cut
    from (same storage, zero head, zero block).
    """
    zero = head_contribution(variant, zero_head(layout), layout)
    head = head_contribution(variant, variant[: layout.ell], layout)
    delta = (variant_answer - head) - (store_answer - zero) + baseline_contribution(variant, layout)
    if not 0 <= delta <= layout.s:
        raise LayoutCorruptionError(f"block contribution {delta} outside [0..{layout.s}]")
    return delta


def block_evidence(x: CodeString, layout: LayoutParams) -> tuple[tuple[CodeString, int], ...]:
    """Reference and sample evidence of the current block, all as on-block matches."""
    q = query_count_size_one(x, layout)
    baseline = baseline_contribution(x, layout)
    zero = head_contribution(x, zero_head(layout), layout)
    evidence: list[tuple[CodeString, int]] = [((0,) * layout.s, baseline)]
    for color, (store_answer, variant_answer) in enumerate(
        read_reference_records(x, layout, layout.k - 1), start=1
    ):
        variant = variant_answer - head_contribution(x, variant_head(store_answer, layout), layout)
        evidence.append(((color,) * layout.s, variant - (store_answer - zero) + baseline))
    evidence.extend(
        (r.fragment, r.delta) for r in read_sample_records(x, layout, q - layout.k)
    )
    return tuple(evidence)


# ── String builders ───────────────────────────────────────────────────────


def _storage_tail(layout: LayoutParams, block: int) -> CodeString:
    """Zero storage, counter = ``block``, suffix 0 1."""
    zeros = layout.storage_limit - layout.storage_base
    return (0,) * zeros + binary_encode(block, layout.counter_width) + (0, 1)


def intermediate_string(x: CodeString, layout: LayoutParams) -> CodeString:
    """Move the fixed prefix into the prefix copy and open block 1."""
    return (
        zero_head(layout)
        + (0,) * (layout.b * layout.s)
        + x[: layout.ell]
        + _storage_tail(layout, 1)
    )


def variant_string(
    x: CodeString, answer: int, fragment: CodeString, layout: LayoutParams
) -> CodeString:
    block = block_index_size_one(x, layout)
    body = variant_head(answer, layout) + x[layout.ell :]
    return substitute_block(body, layout.block(block), fragment)


def _write(x: CodeString, start: int, record: CodeString) -> CodeString:
    return x[:start] + record + x[start + len(record) :]


def _reset_variant(x: CodeString, layout: LayoutParams) -> CodeString:
    block = layout.block(block_index_size_one(x, layout))
    body = zero_head(layout) + x[layout.ell :]
    return substitute_block(body, block, (0,) * block.size)


def add_reference(x: CodeString, answer: int, layout: LayoutParams, color: int) -> CodeString:
    """Record the answer of the reference variant ``x`` for ``color``."""
    record = x[1 : layout.ell] + binary_encode(answer, layout.ell_n) + (1,)
    start = layout.storage_base + (color - 1) * layout.reference_record_width
    return _write(_reset_variant(x, layout), start, record)


def add_sample(x: CodeString, answer: int, layout: LayoutParams, q: int) -> CodeString:
    """Record the fragment of the sample variant ``x`` with its contribution."""
    store_answer = binary_decode(x[1 : layout.ell])
    delta = variant_contribution(x, answer, store_answer, layout)
    fragment = block_of(x, block_index_size_one(x, layout), layout)
    record = x[1 : layout.ell] + fragment + binary_encode(delta, layout.ell_s) + (1,)
    start = layout.reference_end + (q - layout.k) * layout.sample_record_width
    return _write(_reset_variant(x, layout), start, record)


def resolution_string(x: CodeString, fragment: CodeString, layout: LayoutParams) -> CodeString:
    block = layout.block(block_index_size_one(x, layout))
    return substitute_block((1,) * layout.ell + x[layout.ell :], block, fragment)


def update_string(y: CodeString, layout: LayoutParams) -> CodeString:
    """Keep the solved blocks, clear the storage and move to the next block."""
    block = block_index_size_one(y, layout)
    solved_end = layout.ell + block * layout.s
    return (
        zero_head(layout)
        + y[layout.ell : solved_end]
        + (0,) * ((layout.b - block) * layout.s)
        + y[layout.prefix_copy.slice]
        + _storage_tail(layout, block + 1)
    )


def prep_string(x: CodeString, layout: LayoutParams, rng: np.random.Generator) -> CodeString:
    """Restore the secret's prefix and the solved blocks; fresh tail after them."""
    last = x[layout.blocks_end - 1]
    tail = (last + int(rng.integers(1, layout.k))) % layout.k
    return (
        x[layout.prefix_copy.slice]
        + x[layout.ell : layout.blocks_end]
        + (tail,) * (layout.n - layout.blocks_end)
    )


def endgame_guess(x: CodeString, k: int, rng: np.random.Generator) -> CodeString:
    current = x[-2] * k + x[-1]
    pick = int(rng.integers(k * k - 1))
    if pick >= current:
        pick += 1
    return x[:-2] + (pick // k, pick % k)


# ── Dispatch ──────────────────────────────────────────────────────────────


def classify(x: CodeString, layout: LayoutParams) -> SizeOneView:
    """Phase of a stored string; every string the strategy stores has exactly one."""
    n, k, t = layout.n, layout.k, layout.t
    if x[-2:] == (0, 1):
        if layout.b == 0:
            raise LayoutCorruptionError("sampling suffix in a layout without blocks")
        block = block_index_size_one(x, layout)
        if block == layout.b + 1:
            return SizeOneView(SizeOnePhase.PREP, block=block)
        if not 1 <= block <= layout.b:
            raise LayoutCorruptionError(f"block counter {block} outside [1..{layout.b + 1}]")
        q = query_count_size_one(x, layout)
        variant = x[0] == 1
        if q < k:
            step = SizeOneStep.ADD_REFERENCE if variant else SizeOneStep.REFERENCE_VARIANT
            return SizeOneView(SizeOnePhase.SAMPLING, step, block, q)
        if q < t + k:
            step = SizeOneStep.ADD_SAMPLE if variant else SizeOneStep.SAMPLE_VARIANT
            return SizeOneView(SizeOnePhase.SAMPLING, step, block, q)
        if q == t + k:
            step = SizeOneStep.UPDATE if variant else SizeOneStep.RESOLVE
            return SizeOneView(SizeOnePhase.OPTIMIZE, step, block, q)
        raise LayoutCorruptionError(f"record count {q} beyond {t + k}")
    if x[-1] != x[-2]:
        raise LayoutCorruptionError(f"unexpected suffix {x[-2:]}")
    tn = tail_number(x)
    if tn <= layout.ell:
        return SizeOneView(SizeOnePhase.PHASE0)
    if layout.b > 0 and tn == layout.ell + 1:
        return SizeOneView(SizeOnePhase.INTERMEDIATE)
    if layout.blocks_end < tn <= n - 2:
        return SizeOneView(SizeOnePhase.PHASE2)
    if tn == n - 1:
        return SizeOneView(SizeOnePhase.ENDGAME)
    raise LayoutCorruptionError(f"tail number {tn} matches no phase")


def sampling_step(
    x: CodeString, answer: int, view: SizeOneView, layout: LayoutParams, rng: np.random.Generator
) -> CodeString:
    s = layout.s
    if view.step is SizeOneStep.REFERENCE_VARIANT:
        color = 1 if view.q == 0 else view.q
        return variant_string(x, answer, (color,) * s, layout)
    if view.step is SizeOneStep.ADD_REFERENCE:
        return add_reference(x, answer, layout, view.q)
    if view.step is SizeOneStep.SAMPLE_VARIANT:
        fragment = tuple(int(c) for c in rng.integers(0, layout.k, size=s))
        return variant_string(x, answer, fragment, layout)
    return add_sample(x, answer, layout, view.q)


def optimize_block_step(
    x: CodeString, view: SizeOneView, layout: LayoutParams, rng: np.random.Generator
) -> CodeString:
    if view.step is SizeOneStep.UPDATE:
        _log.debug("size-one: block %d solved", view.block)
        return update_string(x, layout)
    fragment, size = sample_consistent(block_evidence(x, layout), layout.s, layout.k, rng)
    if size == 0:
        raise LayoutCorruptionError(f"no fragment of block {view.block} fits the stored records")
    return resolution_string(x, fragment, layout)


class SizeOneStrategy(Strategy):
    name = "size-one"

    def __init__(self, params: GameParams, layout: LayoutParams | None = None) -> None:
        super().__init__(params)
        self.layout = layout or size_one_layout(params.n, params.k)
        if self.layout.kind is not LayoutKind.SIZE_ONE:
            raise ArgumentError("size-one strategy needs a size-one layout")
        if (self.layout.n, self.layout.k) != (params.n, params.k):
            raise ArgumentError("layout was built for a different game")

    def view(self, memory: MemoryState) -> SizeOneView:
        if not memory.pairs:
            return SizeOneView(SizeOnePhase.INIT)
        return classify(memory.only[0], self.layout)

    def propose(self, memory: MemoryState, rng: np.random.Generator) -> CodeString:
        layout = self.layout
        view = self.view(memory)
        if view.phase is SizeOnePhase.INIT:
            return (int(rng.integers(layout.k)),) * layout.n
        x, answer = memory.only
        if view.phase in (SizeOnePhase.PHASE0, SizeOnePhase.PHASE2):
            return linalg_step(x, layout.k, rng)[0]
        if view.phase is SizeOnePhase.INTERMEDIATE:
            return intermediate_string(x, layout)
        if view.phase is SizeOnePhase.SAMPLING:
            return sampling_step(x, answer, view, layout, rng)
        if view.phase is SizeOnePhase.OPTIMIZE:
            return optimize_block_step(x, view, layout, rng)
        if view.phase is SizeOnePhase.PREP:
            return prep_string(x, layout, rng)
        return endgame_guess(x, layout.k, rng)

    def select(
        self,
        memory: MemoryState,
        guess: CodeString,
        black: int,
        rng: np.random.Generator,
    ) -> MemoryState:
        view = self.view(memory)
        new = (guess, black)
        if view.phase is SizeOnePhase.INIT:
            return memory.holding(new)
        x, answer = memory.only
        keep = True
        if view.phase in (SizeOnePhase.PHASE0, SizeOnePhase.PHASE2):
            keep = linalg_keeps(x, answer, guess, black, self.layout.k)
        elif view.step is SizeOneStep.RESOLVE:
            keep = variant_contribution(guess, black, answer, self.layout) == self.layout.s
        elif view.phase is SizeOnePhase.ENDGAME:
            keep = black == self.params.n
        return memory.holding(new if keep else (x, answer))

    def phase(self, memory: MemoryState) -> str:
        return _ACCOUNTING[self.view(memory).phase]
