"""Bit primitive tests against brute-force oracles.

The oracles here are deliberately dumb: linear scans over Python lists.
Every structural query (rank, select, access, prefix) is checked against
them on fixed golden inputs and on seeded random instances, including the
degenerate shapes (empty sets, all-zero values, single elements, exact
power-of-two boundaries).
"""

from __future__ import annotations

import random

import pytest

from sdmatch.bits import BitVector, EliasFanoArray, IndexableSet, ceil_log2


# -- oracles ---------------------------------------------------------------

def rank_oracle(bits: list[int], i: int) -> int:
    return sum(bits[:i])


def select_oracle(bits: list[int], k: int, value: int) -> int:
    seen = 0
    for pos, b in enumerate(bits):
        if b == value:
            if seen == k:
                return pos
            seen += 1
    raise AssertionError("oracle select out of range")


# -- ceil_log2 ----------------------------------------------------------------

def test_ceil_log2():
    assert ceil_log2(1) == 0
    assert ceil_log2(2) == 1
    assert ceil_log2(3) == 2
    assert ceil_log2(8) == 3
    assert ceil_log2(9) == 4
    with pytest.raises(ValueError):
        ceil_log2(0)


# -- BitVector ----------------------------------------------------------------

def test_bitvector_tiny_explicit():
    bv = BitVector.from_bits([1, 0, 1, 1, 0, 0, 0, 1], with_select0=True)
    assert bv.length == 8
    assert bv.ones == 4
    assert [bv.get(i) for i in range(8)] == [1, 0, 1, 1, 0, 0, 0, 1]
    assert [bv.rank1(i) for i in range(9)] == [0, 1, 1, 2, 3, 3, 3, 3, 4]
    assert [bv.select1(k) for k in range(4)] == [0, 2, 3, 7]
    assert [bv.select0(k) for k in range(4)] == [1, 4, 5, 6]


def test_bitvector_empty_and_full():
    bv = BitVector([], 0, with_select0=True)
    assert bv.rank1(0) == 0 and bv.ones == 0 and bv.zeros == 0
    with pytest.raises(IndexError):
        bv.select1(0)
    full = BitVector.from_bits([1] * 130)
    assert full.rank1(130) == 130
    assert full.select1(129) == 129


def test_bitvector_rejects_stray_tail_bits():
    with pytest.raises(ValueError):
        BitVector([0b111], 2)
    with pytest.raises(ValueError):
        BitVector([1, 1], 64)
    with pytest.raises(ValueError):
        BitVector.from_ones(4, [4])


@pytest.mark.parametrize("length,density", [
    (1, 0.5), (63, 0.5), (64, 0.5), (65, 0.5),
    (511, 0.9), (512, 0.1), (513, 0.5),
    (4095, 0.5), (4096, 0.02), (4097, 0.98),
    (10_000, 0.5), (20_000, 0.004),
])
def test_bitvector_rank_select_random(length, density):
    rng = random.Random(length * 1000 + int(density * 100))
    bits = [1 if rng.random() < density else 0 for _ in range(length)]
    bv = BitVector.from_bits(bits, with_select0=True)
    assert bv.ones == sum(bits)

    probe = range(length + 1) if length <= 600 else sorted(rng.sample(range(length + 1), 400))
    running = [0]
    for b in bits:
        running.append(running[-1] + b)
    for i in probe:
        assert bv.rank1(i) == running[i], f"rank1({i})"
        assert bv.rank0(i) == i - running[i]

    ones_pos = [i for i, b in enumerate(bits) if b]
    zero_pos = [i for i, b in enumerate(bits) if not b]
    k_probe = range(len(ones_pos)) if len(ones_pos) <= 600 else rng.sample(range(len(ones_pos)), 300)
    for k in k_probe:
        assert bv.select1(k) == ones_pos[k], f"select1({k})"
    k_probe = range(len(zero_pos)) if len(zero_pos) <= 600 else rng.sample(range(len(zero_pos)), 300)
    for k in k_probe:
        assert bv.select0(k) == zero_pos[k], f"select0({k})"

    # select/rank are inverses on the stored positions
    for k in (0, len(ones_pos) // 2, len(ones_pos) - 1):
        if 0 <= k < len(ones_pos):
            assert bv.rank1(bv.select1(k)) == k


def test_bitvector_sample_boundaries():
    # Exactly hits the 1024-one select sample stride.
    bits = [1] * 3072
    bv = BitVector.from_bits(bits)
    for k in (0, 1023, 1024, 1025, 2047, 2048, 3071):
        assert bv.select1(k) == k


def test_bitvector_long_zero_run_between_samples():
    # A huge gap between adjacent ones exercises the word-skipping scan.
    positions = [0, 1, 200_000, 200_001]
    bv = BitVector.from_ones(200_002, positions, with_select0=True)
    for k, p in enumerate(positions):
        assert bv.select1(k) == p
    assert bv.select0(100_000) == 100_002


def test_bitvector_word_roundtrip():
    rng = random.Random(7)
    bits = [rng.randint(0, 1) for _ in range(777)]
    bv = BitVector.from_bits(bits, with_select0=True)
    words = bv.to_words()
    clone = BitVector.from_words(iter(words), with_select0=True)
    assert clone.length == bv.length and clone.words == bv.words
    assert clone.rank1(777) == bv.rank1(777)


# -- EliasFanoArray ----------------------------------------------------------

def test_ef_four_lengths_golden():
    # Values 2,1,2,3: prefix sums 2,3,5,8; U=8, n=4 so the low width is 1
    # and the payload is exactly 4 * (1 + 2) = 12 bits.
    ef = EliasFanoArray([2, 1, 2, 3])
    assert ef.low_width == 1
    assert ef.payload_bits() == 12
    assert [ef.prefix(i) for i in range(4)] == [2, 3, 5, 8]
    assert [ef.access(i) for i in range(4)] == [2, 1, 2, 3]


def test_ef_zeros_and_singletons():
    ef = EliasFanoArray([0, 0, 0])
    assert ef.low_width == 0
    assert ef.payload_bits() == 6
    assert [ef.access(i) for i in range(3)] == [0, 0, 0]

    ef = EliasFanoArray([42])
    assert ef.access(0) == 42

    ef = EliasFanoArray([0])
    assert ef.access(0) == 0


def test_ef_rejects_bad_input():
    with pytest.raises(ValueError):
        EliasFanoArray([])
    with pytest.raises(ValueError):
        EliasFanoArray([1, -2, 3])
    with pytest.raises(OverflowError):
        EliasFanoArray([1 << 62, 1 << 62])


def test_ef_payload_formula_exact():
    # n * (ceil(log2(max(U/n,1))) + 2), checked over assorted shapes.
    cases = [
        [5], [0, 0, 1], [1] * 100, [1000, 0, 0, 0], list(range(50)),
        [7, 7, 7, 7, 7, 7, 7], [2 ** 40, 1, 2 ** 30],
    ]
    for values in cases:
        ef = EliasFanoArray(values)
        n, u = len(values), sum(values)
        lw = 0
        while (n << lw) < u:
            lw += 1
        assert ef.low_width == lw, values
        assert ef.payload_bits() == n * (lw + 2), values


@pytest.mark.parametrize("n,hi", [(1, 10), (2, 1), (10, 0), (100, 5), (1000, 1000), (5000, 3), (997, 2 ** 33)])
def test_ef_roundtrip_random(n, hi):
    rng = random.Random(n * 31 + (hi % 1009))
    values = [rng.randint(0, hi) for _ in range(n)]
    ef = EliasFanoArray(values)
    assert len(ef) == n
    running = 0
    probe = range(n) if n <= 1200 else rng.sample(range(n), 500)
    prefixes = []
    running = 0
    for v in values:
        running += v
        prefixes.append(running)
    for i in probe:
        assert ef.access(i) == values[i], f"access({i})"
        assert ef.prefix(i) == prefixes[i]


def test_ef_word_roundtrip():
    values = [3, 0, 0, 12, 9, 2 ** 20, 1]
    ef = EliasFanoArray(values, with_select0=True)
    clone = EliasFanoArray.from_words(iter(ef.to_words()), with_select0=True)
    assert [clone.access(i) for i in range(len(values))] == values
    assert clone.total == ef.total and clone.low_width == ef.low_width


# -- IndexableSet ------------------------------------------------------------

def test_indexable_set_terminals_golden():
    # The terminal-state dictionary of the worked four-pattern automaton.
    s = IndexableSet([2, 3, 6, 7], 8)
    assert len(s) == 4
    assert [s.select(i) for i in range(4)] == [2, 3, 6, 7]
    assert s.rank(2) == 0
    assert s.rank(3) == 1
    assert s.rank(6) == 2
    assert s.rank(7) == 3
    for absent in (0, 1, 4, 5):
        assert s.rank(absent) is None
    assert 6 in s and 4 not in s


def test_indexable_set_empty():
    s = IndexableSet([], 100)
    assert len(s) == 0
    assert s.rank(5) is None
    with pytest.raises(IndexError):
        s.select(0)


def test_indexable_set_validation():
    with pytest.raises(ValueError):
        IndexableSet([3, 3], 10)
    with pytest.raises(ValueError):
        IndexableSet([5, 4], 10)
    with pytest.raises(ValueError):
        IndexableSet([0, 10], 10)
    s = IndexableSet([0, 9], 10)
    with pytest.raises(ValueError):
        s.rank(10)
    with pytest.raises(ValueError):
        s.rank(-1)


def test_indexable_set_dense_and_sparse_extremes():
    u = 4096
    full = IndexableSet(list(range(u)), u)
    assert full.rank(u - 1) == u - 1 and full.select(17) == 17

    sparse = IndexableSet([0, u - 1], u)
    assert sparse.rank(0) == 0 and sparse.rank(u - 1) == 1
    assert sparse.rank(u // 2) is None


@pytest.mark.parametrize("m,universe", [
    (1, 2), (5, 8), (64, 64), (100, 10_000), (1000, 1 << 20), (4096, 4096), (3000, 1 << 40),
])
def test_indexable_set_random_vs_sorted_oracle(m, universe):
    rng = random.Random(m ^ universe)
    keys = sorted(rng.sample(range(universe), m))
    s = IndexableSet(keys, universe)
    lookup = {k: i for i, k in enumerate(keys)}

    for i in range(0, m, max(1, m // 257)):
        assert s.select(i) == keys[i]

    probes = set(keys[:: max(1, m // 129)])
    probes.update(rng.randrange(universe) for _ in range(400))
    probes.update((0, universe - 1))
    for key in probes:
        assert s.rank(key) == lookup.get(key), f"rank({key})"


def test_indexable_set_exhaustive_small_universe():
    rng = random.Random(99)
    universe = 1 << 16
    keys = sorted(rng.sample(range(universe), 700))
    s = IndexableSet(keys, universe)
    lookup = {k: i for i, k in enumerate(keys)}
    for key in range(universe):
        assert s.rank(key) == lookup.get(key)


def test_indexable_set_word_roundtrip():
    keys = [1, 30, 31, 32, 900, 901]
    s = IndexableSet(keys, 1000)
    clone = IndexableSet.from_words(iter(s.to_words()))
    assert [clone.select(i) for i in range(len(keys))] == keys
    assert clone.rank(900) == 4 and clone.rank(2) is None
    empty = IndexableSet.from_words(iter(IndexableSet([], 9).to_words()))
    assert len(empty) == 0 and empty.universe == 9
