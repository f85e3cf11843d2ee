"""String bookkeeping shared by the encoding strategies.

Positions are 1-based in every public function here (``tail_number`` of
``[0, 0, 1, 1, 1]`` is 3), matching how layouts are written down.  Binary
fields are most-significant digit first.

Size-one strings are laid out as::

    [flag | answer field | block 1 .. block b | prefix copy | storage | counter | 0 1]
     1      2..l          l+1 .. l+bs          l+bs+1..2l+bs

Size-two storage strings are ``[counter | record | record | ... | 0..0 | 1]``.
"""

from __future__ import annotations

import logging
import math
from collections.abc import Sequence
from dataclasses import dataclass
from enum import Enum
from typing import Any

from app.core.config import load_config, section
from app.core.consistent import consistent_sample_count
from app.core.errors import ArgumentError, InfeasibleLayoutError, LayoutCorruptionError
from app.core.game import CodeString

_log = logging.getLogger(__name__)


class LayoutKind(str, Enum):
    SIZE_ONE = "size-one"
    SIZE_TWO = "size-two"


@dataclass(frozen=True, slots=True)
class Block:
    """Inclusive 1-based position range."""

    first: int
    last: int

    @property
    def size(self) -> int:
        return self.last - self.first + 1

    @property
    def slice(self) -> slice:
        return slice(self.first - 1, self.last)

    def positions(self) -> range:
        return range(self.first, self.last + 1)


@dataclass(frozen=True, slots=True)
class LayoutParams:
    kind: LayoutKind
    n: int
    k: int
    s: int
    ell_n: int
    ell: int
    ell_s: int
    epsilon: float
    t: int
    big_k: float
    b: int
    counter_width: int

    # ── blocks ──

    @property
    def block_count(self) -> int:
        if self.kind is LayoutKind.SIZE_TWO:
            return -(-(self.n - 1) // self.s)
        return self.b

    def block(self, i: int) -> Block:
        if not 1 <= i <= self.block_count:
            raise ArgumentError(f"block index {i} outside [1..{self.block_count}]")
        if self.kind is LayoutKind.SIZE_TWO:
            return Block((i - 1) * self.s + 1, min(i * self.s, self.n - 1))
        return Block(self.ell + (i - 1) * self.s + 1, self.ell + i * self.s)

    # ── size-two fields ──

    def record_width(self, i: int) -> int:
        """Width of one size-two record for block ``i``."""
        return self.block(i).size + self.ell_n + 1

    # ── size-one fields ──

    @property
    def blocks_end(self) -> int:
        return self.ell + self.b * self.s

    @property
    def prefix_copy(self) -> Block:
        return Block(self.blocks_end + 1, self.blocks_end + self.ell)

    @property
    def storage_base(self) -> int:
        """Last position before the storage region (``2l + bs``)."""
        return 2 * self.ell + self.b * self.s

    @property
    def reference_record_width(self) -> int:
        return 2 * self.ell_n + 1

    @property
    def sample_record_width(self) -> int:
        return self.ell_n + self.s + self.ell_s + 1

    @property
    def reference_end(self) -> int:
        return self.storage_base + (self.k - 1) * self.reference_record_width

    @property
    def counter_field(self) -> Block:
        return Block(self.n - self.counter_width - 1, self.n - 2)

    @property
    def storage_limit(self) -> int:
        """Last storage position; the ``p1`` search never looks past it."""
        return self.n - self.counter_width - 2


# ── Scalar helpers ────────────────────────────────────────────────────────


def ceil_log2(value: int) -> int:
    return max(0, (value - 1).bit_length())


def ceil_sqrt(value: int) -> int:
    return math.isqrt(value - 1) + 1 if value > 1 else 1


def default_block_size(n: int, k: int, candidates: int | None = None) -> int:
    """``min(ceil(sqrt n), largest s with k**s <= candidates)``."""
    if candidates is None:
        candidates = int(section("layout", load_config())["block_candidates"])
    cap = 1
    while k ** (cap + 1) <= candidates:
        cap += 1
    return min(ceil_sqrt(n), cap)


# ── Layout construction ───────────────────────────────────────────────────


def _layout_defaults() -> dict[str, Any]:
    return section("layout", load_config())


def _size_two_capacity(n: int, k: int, s: int, ell_n: int) -> int:
    """Sample records a storage string holds next to the ``k`` references."""
    return (n - 1 - ell_n) // (s + ell_n + 1) - k


def _size_two_block_size(n: int, k: int, eps: float, ell_n: int) -> int:
    """Largest block size whose full sample count fits the storage string.

    Small ``n`` has no such size; then the largest one with room for one sample
    record is used and the sample count is lowered to what fits.
    """
    cap = default_block_size(n, k)
    sizes = range(cap, k, -1)
    for s in sizes:
        if consistent_sample_count(s, k, eps) <= _size_two_capacity(n, k, s, ell_n):
            return s
    for s in sizes:
        if _size_two_capacity(n, k, s, ell_n) >= 1:
            return s
    return cap


def size_two_layout(
    n: int,
    k: int,
    *,
    epsilon: float | None = None,
    block_size: int | None = None,
    samples: int | None = None,
) -> LayoutParams:
    """Layout for the two-cell strategy.

    Without ``block_size`` the block size is the largest one (up to
    :func:`default_block_size`) whose storage string holds the full
    :func:`consistent_sample_count`.  ``t`` is that count, lowered to what the
    storage string can hold when no block size fits it; ``samples`` overrides it.
    """
    defaults = _layout_defaults()
    eps = float(defaults["epsilon"] if epsilon is None else epsilon)
    ell_n = ceil_log2(n) + 1
    s = _size_two_block_size(n, k, eps, ell_n) if block_size is None else block_size
    if s < 1 or s > n - 1:
        raise InfeasibleLayoutError(f"block size {s} does not fit n={n}")
    if s <= k:
        raise InfeasibleLayoutError(f"block size {s} must exceed k={k}")
    stride = s + ell_n + 1
    capacity = _size_two_capacity(n, k, s, ell_n)
    if capacity < 0:
        raise InfeasibleLayoutError(
            f"n={n} cannot store the {k} reference records of width {stride}"
        )
    if samples is None:
        t = min(consistent_sample_count(s, k, eps), capacity)
    elif samples > capacity:
        raise InfeasibleLayoutError(f"{samples} samples exceed the storage capacity {capacity}")
    else:
        t = samples
    layout = LayoutParams(
        kind=LayoutKind.SIZE_TWO,
        n=n,
        k=k,
        s=s,
        ell_n=ell_n,
        ell=ell_n + 1,
        ell_s=ceil_log2(s) + 1,
        epsilon=eps,
        t=t,
        big_k=0.0,
        b=-(-(n - 1) // s),
        counter_width=ell_n,
    )
    _log.debug("size-two layout: %s", describe_layout(layout))
    return layout


def _size_one_fixed_part(
    n: int, k: int, ell_n: int, ell: int, t: int, record: int, counter_width: int
) -> int:
    return 1 + ell_n + ell + (k - 1) * (2 * ell_n + 1) + t * record + counter_width + 2


def size_one_layout(
    n: int,
    k: int,
    *,
    epsilon: float | None = None,
    big_k: float | None = None,
    block_size: int | None = None,
    samples: int | None = None,
    blocks: int | None = None,
) -> LayoutParams:
    """Layout for the one-cell strategy.

    ``b`` is ``floor(((n-2)/s)(1 - K/log2 n))`` clamped to ``[0, largest b that
    fits]``; ``blocks`` forces a value and fails if it does not fit.
    """
    defaults = _layout_defaults()
    eps = float(defaults["epsilon"] if epsilon is None else epsilon)
    slack = float(defaults["big_k"] if big_k is None else big_k)
    ell_n = ceil_log2(n) + 1
    ell = ell_n + 1
    if n < ell + 3:
        raise InfeasibleLayoutError(f"n={n} is too short for a prefix of {ell} positions")
    s = default_block_size(n, k) if block_size is None else block_size
    if s < 1:
        raise InfeasibleLayoutError(f"block size must be positive, got {s}")
    ell_s = ceil_log2(s) + 1
    counter_width = max(ell_s, ((n - 2) // s + 1).bit_length())

    if s <= k:
        # No sampling possible at this size; the linear phases do all the work.
        t = 0
        max_b = 0
    else:
        t = consistent_sample_count(s, k, eps) if samples is None else samples
        fixed = _size_one_fixed_part(
            n, k, ell_n, ell, t, ell_n + s + ell_s + 1, counter_width
        )
        max_b = max(0, (n - fixed) // s)

    if blocks is None:
        if n > 2 and slack < math.log2(n):
            formula = math.floor(((n - 2) / s) * (1.0 - slack / math.log2(n)))
        else:
            formula = 0
        b = max(0, min(formula, max_b))
    elif blocks < 0 or blocks > max_b:
        raise InfeasibleLayoutError(f"{blocks} blocks do not fit (at most {max_b})")
    else:
        b = blocks

    layout = LayoutParams(
        kind=LayoutKind.SIZE_ONE,
        n=n,
        k=k,
        s=s,
        ell_n=ell_n,
        ell=ell,
        ell_s=ell_s,
        epsilon=eps,
        t=t,
        big_k=slack,
        b=b,
        counter_width=counter_width,
    )
    if b > 0 and storage_requirement(layout) > n:
        raise InfeasibleLayoutError(
            f"storage requirement {storage_requirement(layout)} exceeds n={n}"
        )
    _log.debug("size-one layout: %s", describe_layout(layout))
    return layout


def storage_requirement(layout: LayoutParams) -> int:
    """Positions needed by the layout.

    Size-one counts every field of the one-cell layout; size-two counts the
    counter, ``t + k`` full-width records and the final marker.
    """
    if layout.kind is LayoutKind.SIZE_TWO:
        stride = layout.s + layout.ell_n + 1
        return layout.ell_n + (layout.t + layout.k) * stride + 1
    return (
        _size_one_fixed_part(
            layout.n,
            layout.k,
            layout.ell_n,
            layout.ell,
            layout.t,
            layout.sample_record_width,
            layout.counter_width,
        )
        + layout.b * layout.s
    )


def describe_layout(layout: LayoutParams) -> dict[str, Any]:
    """All constants of ``layout`` plus its field map, JSON friendly."""
    info: dict[str, Any] = {
        "kind": layout.kind.value,
        "n": layout.n,
        "k": layout.k,
        "s": layout.s,
        "ell_n": layout.ell_n,
        "ell": layout.ell,
        "ell_s": layout.ell_s,
        "epsilon": layout.epsilon,
        "t": layout.t,
        "big_k": layout.big_k,
        "b": layout.b,
        "counter_width": layout.counter_width,
        "block_count": layout.block_count,
        "storage_requirement": storage_requirement(layout),
    }
    if layout.kind is LayoutKind.SIZE_ONE:
        copy_field = layout.prefix_copy
        counter = layout.counter_field
        info["fields"] = {
            "answer": [2, layout.ell],
            "blocks": [layout.ell + 1, layout.blocks_end],
            "prefix_copy": [copy_field.first, copy_field.last],
            "storage": [layout.storage_base + 1, layout.storage_limit],
            "counter": [counter.first, counter.last],
            "suffix": [layout.n - 1, layout.n],
        }
    else:
        info["fields"] = {
            "counter": [1, layout.ell_n],
            "records": [layout.ell_n + 1, layout.n - 1],
            "marker": [layout.n, layout.n],
        }
    return info


# ── Generic string operations ─────────────────────────────────────────────


def tail_number(x: Sequence[int]) -> int:
    """Smallest ``i`` such that ``x[i..n]`` is constant."""
    if not x:
        raise ArgumentError("tail number of an empty string")
    i = len(x)
    last = x[-1]
    while i > 1 and x[i - 2] == last:
        i -= 1
    return i


def last_one_pos(x: Sequence[int], limit: int) -> int:
    """Largest ``i <= limit`` with ``x_i = 1``, or 0 when there is none."""
    for i in range(min(limit, len(x)), 0, -1):
        if x[i - 1] == 1:
            return i
    return 0


def binary_encode(h: int, width: int) -> CodeString:
    if width < 1 or not 0 <= h < (1 << width):
        raise ArgumentError(f"{h} does not fit in {width} binary digits")
    return tuple((h >> (width - 1 - j)) & 1 for j in range(width))


def binary_decode(fragment: Sequence[int]) -> int:
    value = 0
    for digit in fragment:
        if digit not in (0, 1):
            raise LayoutCorruptionError(f"non-binary digit {digit} in a binary field")
        value = (value << 1) | digit
    return value


def substitute_block(x: Sequence[int], block: Block, r: Sequence[int]) -> CodeString:
    if len(r) != block.size:
        raise ArgumentError(f"fragment of length {len(r)} for a block of size {block.size}")
    if block.first < 1 or block.last > len(x):
        raise ArgumentError(f"block {block.first}..{block.last} outside 1..{len(x)}")
    return tuple(x[: block.first - 1]) + tuple(r) + tuple(x[block.last :])


def block_of(x: Sequence[int], i: int, layout: LayoutParams) -> CodeString:
    return tuple(x[layout.block(i).slice])


# ── Decoders ──────────────────────────────────────────────────────────────


def block_index_size_two(x: Sequence[int], layout: LayoutParams) -> int:
    return binary_decode(x[: layout.ell_n])


def block_index_size_one(x: Sequence[int], layout: LayoutParams) -> int:
    return binary_decode(x[layout.counter_field.slice])


def query_count_size_two(x: Sequence[int], layout: LayoutParams) -> int:
    """Records already stored for the current block of a size-two storage string."""
    p1 = last_one_pos(x, layout.n - 1)
    if p1 <= layout.ell_n:
        return 0
    i = block_index_size_two(x, layout)
    if not 1 <= i <= layout.block_count:
        raise LayoutCorruptionError(f"storage string holds records for block {i}")
    width = layout.record_width(i)
    q, rest = divmod(p1 - layout.ell_n, width)
    if rest:
        raise LayoutCorruptionError(
            f"last marker at {p1} is not on a record boundary (width {width})"
        )
    return q


def query_count_size_one(x: Sequence[int], layout: LayoutParams) -> int:
    """Progress counter of the current block of a size-one string.

    0 and 1 for the two states before any record exists (split by the flag),
    ``j`` while reference ``j`` is pending, then ``k + samples stored``.
    """
    p1 = last_one_pos(x, layout.storage_limit)
    base = layout.storage_base
    if p1 <= base:
        return 0 if x[0] == 0 else 1
    if p1 < layout.reference_end:
        j, rest = divmod(p1 - base, layout.reference_record_width)
        if rest:
            raise LayoutCorruptionError(f"marker at {p1} is not on a reference record boundary")
        return j + 1
    j, rest = divmod(p1 - layout.reference_end, layout.sample_record_width)
    if rest:
        raise LayoutCorruptionError(f"marker at {p1} is not on a sample record boundary")
    return layout.k + j


def part_flag(
    y: Sequence[int], y_answer: int, x: Sequence[int], layout: LayoutParams
) -> int:
    """1 when the last record of storage string ``x`` is ``y``'s block and answer."""
    q = query_count_size_two(x, layout)
    i = block_index_size_two(x, layout)
    if q == 0 or i == 0:
        return 0
    p1 = layout.ell_n + q * layout.record_width(i)
    size = layout.block(i).size
    stored_answer = binary_decode(x[p1 - 1 - layout.ell_n : p1 - 1])
    stored_block = tuple(x[p1 - 1 - layout.ell_n - size : p1 - 1 - layout.ell_n])
    return int(stored_answer == y_answer and stored_block == block_of(y, i, layout))
