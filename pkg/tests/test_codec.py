from __future__ import annotations

import itertools

import pytest

from app.core.codec import (
    Block,
    LayoutKind,
    binary_decode,
    binary_encode,
    block_index_size_one,
    block_of,
    ceil_log2,
    ceil_sqrt,
    default_block_size,
    describe_layout,
    last_one_pos,
    query_count_size_two,
    size_one_layout,
    size_two_layout,
    storage_requirement,
    substitute_block,
    tail_number,
)
from app.core.consistent import consistent_sample_count
from app.core.errors import ArgumentError, InfeasibleLayoutError, LayoutCorruptionError


def _tail_by_scan(x: tuple[int, ...]) -> int:
    n = len(x)
    return min(i for i in range(1, n + 1) if len(set(x[i - 1 :])) == 1)


def _last_one_by_scan(x: tuple[int, ...], limit: int) -> int:
    hits = [i for i in range(1, min(limit, len(x)) + 1) if x[i - 1] == 1]
    return hits[-1] if hits else 0


# ── generic string operations ──


def test_tail_number_examples() -> None:
    assert tail_number((0, 0, 1, 1, 1)) == 3
    assert tail_number((1, 1, 1)) == 1
    assert tail_number((1, 0)) == 2


@pytest.mark.parametrize("n", range(1, 9))
def test_tail_number_and_last_one_match_scans(n: int) -> None:
    for x in itertools.product((0, 1), repeat=n):
        assert tail_number(x) == _tail_by_scan(x)
        for limit in range(0, n + 1):
            assert last_one_pos(x, limit) == _last_one_by_scan(x, limit)


def test_tail_number_random_cases(rng) -> None:
    for _ in range(500):
        n = int(rng.integers(1, 30))
        x = tuple(int(c) for c in rng.integers(0, 3, size=n))
        assert tail_number(x) == _tail_by_scan(x)


def test_binary_round_trip_over_answer_range() -> None:
    n = 300
    width = ceil_log2(n) + 1
    for h in range(n + 1):
        encoded = binary_encode(h, width)
        assert len(encoded) == width
        assert binary_decode(encoded) == h
    assert binary_encode(5, 4) == (0, 1, 0, 1)


def test_binary_encode_rejects_overflow() -> None:
    with pytest.raises(ArgumentError):
        binary_encode(16, 4)
    with pytest.raises(ArgumentError):
        binary_encode(-1, 4)


def test_binary_decode_rejects_non_binary_digit() -> None:
    with pytest.raises(LayoutCorruptionError):
        binary_decode((1, 2, 0))


def test_substitute_and_block_of_are_inverse() -> None:
    layout = size_two_layout(128, 2)
    x = tuple([1] * 128)
    for i in range(1, layout.block_count + 1):
        block = layout.block(i)
        r = tuple(j % 2 for j in range(block.size))
        y = substitute_block(x, block, r)
        assert block_of(y, i, layout) == r
        assert substitute_block(y, block, block_of(x, i, layout)) == x


def test_substitute_block_checks_sizes() -> None:
    with pytest.raises(ArgumentError):
        substitute_block((0, 0, 0, 0), Block(2, 3), (1,))
    with pytest.raises(ArgumentError):
        substitute_block((0, 0, 0), Block(3, 4), (1, 1))


def test_scalar_helpers() -> None:
    assert ceil_log2(1) == 0
    assert ceil_log2(512) == 9
    assert ceil_log2(513) == 10
    assert ceil_sqrt(128) == 12
    assert ceil_sqrt(144) == 12
    assert default_block_size(4096, 2) == 20
    assert default_block_size(4096, 3) == 12
    assert default_block_size(64, 2) == 8


# ── size-two layout ──


def test_size_two_layout_clamps_samples_to_storage() -> None:
    layout = size_two_layout(128, 2)
    assert layout.kind is LayoutKind.SIZE_TWO
    assert (layout.s, layout.ell_n, layout.t) == (12, 8, 3)
    assert layout.block_count == 11
    assert layout.block(11) == Block(121, 127)
    assert layout.record_width(11) == 7 + 8 + 1
    assert storage_requirement(layout) <= 128


def test_size_two_layout_small_n_is_infeasible() -> None:
    with pytest.raises(InfeasibleLayoutError):
        size_two_layout(16, 2)
    with pytest.raises(InfeasibleLayoutError):
        size_two_layout(128, 2, samples=4)


def test_size_two_layout_takes_full_sample_count_when_it_fits() -> None:
    layout = size_two_layout(1024, 2)
    assert (layout.s, layout.t) == (11, 41)
    assert layout.t == consistent_sample_count(11, 2, 1.0)
    assert storage_requirement(layout) <= 1024
    layout = size_two_layout(4096, 2)
    assert (layout.s, layout.t) == (20, 55)
    assert layout.t == consistent_sample_count(20, 2, 1.0)


def test_size_two_layout_keeps_a_sample_for_three_colors() -> None:
    layout = size_two_layout(64, 3)
    assert (layout.s, layout.t, layout.block_count) == (6, 1, 11)
    assert storage_requirement(layout) == 64
    layout = size_two_layout(144, 3)
    assert (layout.s, layout.t) == (12, 3)
    assert storage_requirement(layout) <= 144


def test_size_two_query_count_on_blank_and_misaligned_strings() -> None:
    layout = size_two_layout(64, 2)
    blank = (0,) * 63 + (1,)
    assert query_count_size_two(blank, layout) == 0
    # Block index 1, one marker that is not on a record boundary.
    x = list(blank)
    x[layout.ell_n - 1] = 1
    x[layout.ell_n + 2] = 1
    with pytest.raises(LayoutCorruptionError):
        query_count_size_two(tuple(x), layout)


# ── size-one layout ──


def test_size_one_layout_with_sampling_fits_exactly() -> None:
    layout = size_one_layout(512, 2, block_size=8, samples=12, big_k=0.0)
    assert layout.kind is LayoutKind.SIZE_ONE
    assert (layout.ell_n, layout.ell, layout.ell_s, layout.counter_width) == (10, 11, 4, 7)
    assert layout.b == 23
    assert storage_requirement(layout) == 512
    info = describe_layout(layout)
    assert info["fields"]["prefix_copy"] == [196, 206]
    assert info["fields"]["storage"] == [207, 503]
    assert info["fields"]["counter"] == [504, 510]
    assert info["fields"]["suffix"] == [511, 512]


def test_size_one_layout_default_runs_random_guessing_at_4096() -> None:
    layout = size_one_layout(4096, 2)
    assert layout.s == 20
    assert layout.b > 0
    assert storage_requirement(layout) <= 4096


def test_size_one_layout_degenerates_to_no_blocks() -> None:
    assert size_one_layout(256, 2).b == 0
    assert size_one_layout(12, 2).b == 0
    tiny = size_one_layout(8, 2, block_size=2)
    assert (tiny.t, tiny.b) == (0, 0)


def test_size_one_layout_rejects_short_strings_and_forced_blocks() -> None:
    with pytest.raises(InfeasibleLayoutError):
        size_one_layout(7, 2)
    with pytest.raises(InfeasibleLayoutError):
        size_one_layout(512, 2, block_size=8, samples=12, blocks=24)
    assert size_one_layout(512, 2, block_size=8, samples=12, blocks=5).b == 5


def test_block_counter_reads_counter_field() -> None:
    layout = size_one_layout(512, 2, block_size=8, samples=12, big_k=0.0)
    x = [0] * 512
    counter = layout.counter_field
    x[counter.slice] = list(binary_encode(17, layout.counter_width))
    x[-1] = 1
    assert block_index_size_one(tuple(x), layout) == 17


def test_layout_block_index_is_checked() -> None:
    layout = size_one_layout(512, 2, block_size=8, samples=12, big_k=0.0)
    assert layout.block(1) == Block(12, 19)
    with pytest.raises(ArgumentError):
        layout.block(24)
