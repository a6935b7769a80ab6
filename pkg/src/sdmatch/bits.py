"""Bit-level building blocks: plain bitvectors and Elias-Fano coded sequences.

Three structures live here, each exposing exact payload/auxiliary bit
accounting so higher layers can report honest space numbers:

* ``BitVector`` -- a packed bit array with O(1)-ish ``rank`` and sampled
  ``select``.  Rank uses a two-level directory (absolute superblock counts
  plus block counts relative to the superblock); select keeps the position
  of every 1024th one (and zero, when requested) and scans forward by whole
  words from the nearest sample.

* ``EliasFanoArray`` -- a sequence of non-negative integers stored as
  Elias-Fano coded prefix sums.  With ``n`` values summing to ``U`` the
  payload is exactly ``n * (ceil(log2(max(U/n, 1))) + 2)`` bits: the low
  halves are packed verbatim and the high halves live in a ``2n``-bit
  unary bitvector.  ``access(i)`` is the difference of two prefix sums,
  i.e. two select queries.

* ``IndexableSet`` -- a strictly increasing key set over a bounded
  universe, Elias-Fano coded as gaps.  ``select(i)`` recovers the i-th
  key in constant-ish time; ``rank(key)`` locates the high-bits bucket
  through select0 on the upper bitvector and binary-searches the low
  parts inside the bucket, returning ``None`` for absent keys.

Words are 64-bit little-endian throughout, matching the on-disk format.
"""

from __future__ import annotations

from typing import Iterable, Iterator, Sequence

WORD_BITS = 64
WORD_MASK = (1 << 64) - 1

# Directory geometry.  Superblocks hold absolute ranks every 4096 bits,
# blocks hold 16-bit ranks relative to their superblock every 512 bits,
# select samples pin every 1024th occurrence.  The nominal widths below
# are what aux_bits() reports.
RANK_SUPER = 4096
RANK_BLOCK = 512
SELECT_SAMPLE = 1024
_SUPER_ENTRY_BITS = 64
_BLOCK_ENTRY_BITS = 16
_SAMPLE_ENTRY_BITS = 64


def ceil_log2(x: int) -> int:
    """Smallest k with 2**k >= x, for x >= 1."""
    if x < 1:
        raise ValueError(f"ceil_log2 needs x >= 1, got {x}")
    return (x - 1).bit_length()


def _word_select(word: int, r: int) -> int:
    """Position of the r-th (0-based) set bit of a 64-bit word."""
    for _ in range(r):
        word &= word - 1
    return (word & -word).bit_length() - 1


class BitVector:
    """Immutable packed bit array with rank/select support."""

    __slots__ = (
        "words", "length", "ones",
        "_sup", "_blk", "_sel1", "_sel0", "_has_sel0",
    )

    def __init__(self, words: Sequence[int], length: int, *, with_select0: bool = False):
        nwords = (length + WORD_BITS - 1) // WORD_BITS
        if len(words) != nwords:
            raise ValueError(f"expected {nwords} words for {length} bits, got {len(words)}")
        words = [w & WORD_MASK for w in words]
        if length % WORD_BITS and words:
            tail = words[-1] >> (length % WORD_BITS)
            if tail:
                raise ValueError("set bits beyond declared length")
        self.words = words
        self.length = length
        self._has_sel0 = with_select0

        # Rank directory: one pass over the words.
        sup = []
        blk = []
        run = 0       # absolute rank at the next block boundary
        sup_base = 0  # absolute rank at the current superblock start
        for i in range(nwords):
            bit = i * WORD_BITS
            if bit % RANK_SUPER == 0:
                sup_base = run
                sup.append(run)
            if bit % RANK_BLOCK == 0:
                blk.append(run - sup_base)
            run += words[i].bit_count()
        # Boundary entries so rank at i == length resolves without special cases.
        if length % RANK_SUPER == 0:
            sup.append(run)
        if length % RANK_BLOCK == 0:
            blk.append(run - (sup[length >> 12] if length % RANK_SUPER == 0 else sup_base))
        self._sup = sup
        self._blk = blk
        self.ones = run

        self._sel1 = self._build_samples(ones=True)
        self._sel0 = self._build_samples(ones=False) if with_select0 else None

    # -- construction helpers ------------------------------------------------

    @classmethod
    def from_ones(cls, length: int, positions: Iterable[int], *, with_select0: bool = False) -> "BitVector":
        words = [0] * ((length + WORD_BITS - 1) // WORD_BITS)
        for p in positions:
            if not 0 <= p < length:
                raise ValueError(f"bit position {p} outside [0, {length})")
            words[p >> 6] |= 1 << (p & 63)
        return cls(words, length, with_select0=with_select0)

    @classmethod
    def from_bits(cls, bits: Iterable[int], *, with_select0: bool = False) -> "BitVector":
        words = [0]
        n = 0
        for b in bits:
            if n >> 6 >= len(words):
                words.append(0)
            if b:
                words[n >> 6] |= 1 << (n & 63)
            n += 1
        return cls(words[: (n + 63) >> 6], n, with_select0=with_select0)

    def _build_samples(self, *, ones: bool) -> list[int]:
        total = self.ones if ones else self.length - self.ones
        samples = []
        seen = 0
        target = 0
        for wi, w in enumerate(self.words):
            if not ones:
                w = ~w & WORD_MASK
                if wi == len(self.words) - 1 and self.length % WORD_BITS:
                    w &= (1 << (self.length % WORD_BITS)) - 1
            c = w.bit_count()
            while target < total and seen + c > target:
                samples.append((wi << 6) + _word_select(w, target - seen))
                target += SELECT_SAMPLE
            seen += c
        return samples

    # -- queries ---------------------------------------------------------------

    def get(self, i: int) -> int:
        if not 0 <= i < self.length:
            raise IndexError(f"bit {i} outside [0, {self.length})")
        return (self.words[i >> 6] >> (i & 63)) & 1

    def rank1(self, i: int) -> int:
        """Number of set bits in [0, i)."""
        if not 0 <= i <= self.length:
            raise IndexError(f"rank position {i} outside [0, {self.length}]")
        r = self._sup[i >> 12] + self._blk[i >> 9]
        w = i >> 6
        for k in range((i >> 9) << 3, w):
            r += self.words[k].bit_count()
        if i & 63:
            r += (self.words[w] & ((1 << (i & 63)) - 1)).bit_count()
        return r

    def rank0(self, i: int) -> int:
        return i - self.rank1(i)

    @property
    def zeros(self) -> int:
        return self.length - self.ones

    def select1(self, k: int) -> int:
        """Position of the k-th (0-based) set bit."""
        if not 0 <= k < self.ones:
            raise IndexError(f"select1 argument {k} outside [0, {self.ones})")
        pos = self._sel1[k >> 10]
        need = k - ((k >> 10) << 10)
        if need == 0:
            return pos
        w = pos >> 6
        cur = (self.words[w] >> (pos & 63)) >> 1  # bits strictly after pos
        base = pos + 1
        while True:
            c = cur.bit_count()
            if c >= need:
                return base + _word_select(cur, need - 1)
            need -= c
            w += 1
            cur = self.words[w]
            base = w << 6

    def select0(self, k: int) -> int:
        """Position of the k-th (0-based) clear bit."""
        if self._sel0 is None:
            raise RuntimeError("select0 directory not built for this bitvector")
        if not 0 <= k < self.zeros:
            raise IndexError(f"select0 argument {k} outside [0, {self.zeros})")
        pos = self._sel0[k >> 10]
        need = k - ((k >> 10) << 10)
        if need == 0:
            return pos
        w = pos >> 6
        cur = ((~self.words[w] & WORD_MASK) >> (pos & 63)) >> 1
        base = pos + 1
        while True:
            c = cur.bit_count()
            if c >= need:
                return base + _word_select(cur, need - 1)
            need -= c
            w += 1
            cur = ~self.words[w] & WORD_MASK
            base = w << 6

    def __len__(self) -> int:
        return self.length

    def __iter__(self) -> Iterator[int]:
        for i in range(self.length):
            yield (self.words[i >> 6] >> (i & 63)) & 1

    # -- space accounting --------------------------------------------------------

    def payload_bits(self) -> int:
        return self.length

    def aux_bits(self) -> int:
        bits = len(self._sup) * _SUPER_ENTRY_BITS + len(self._blk) * _BLOCK_ENTRY_BITS
        bits += len(self._sel1) * _SAMPLE_ENTRY_BITS
        if self._sel0 is not None:
            bits += len(self._sel0) * _SAMPLE_ENTRY_BITS
        return bits

    # -- serialization -------------------------------------------------------------

    def to_words(self) -> list[int]:
        return [self.length, len(self.words), *self.words]

    @classmethod
    def from_words(cls, it: Iterator[int], *, with_select0: bool = False) -> "BitVector":
        length = next(it)
        nwords = next(it)
        words = [next(it) for _ in range(nwords)]
        return cls(words, length, with_select0=with_select0)


class EliasFanoArray:
    """Non-negative integers stored as Elias-Fano coded prefix sums."""

    __slots__ = ("n", "total", "low_width", "low_words", "high")

    def __init__(self, values: Sequence[int], *, with_select0: bool = False):
        n = len(values)
        if n == 0:
            raise ValueError("EliasFanoArray needs at least one value")
        total = 0
        prefix = []
        for v in values:
            if v < 0:
                raise ValueError(f"negative value {v}")
            total += v
            prefix.append(total)
        if total >= 1 << 63:
            raise OverflowError("value sum exceeds the 63-bit word budget")
        self.n = n
        self.total = total
        lw = (max(-(-total // n), 1) - 1).bit_length()  # ceil(log2(max(U/n, 1)))
        self.low_width = lw

        mask = (1 << lw) - 1
        low_words = [0] * ((n * lw + WORD_BITS - 1) // WORD_BITS) if lw else []
        hi_positions = []
        for i, p in enumerate(prefix):
            if lw:
                off = i * lw
                low_words[off >> 6] |= (p & mask) << (off & 63)
                low_words[off >> 6] &= WORD_MASK
                spill = (off & 63) + lw - WORD_BITS
                if spill > 0:
                    low_words[(off >> 6) + 1] |= (p & mask) >> (lw - spill)
            hp = (p >> lw) + i
            hi_positions.append(hp)
        # With lw = ceil(log2(max(U/n, 1))) every high part is <= n, so the
        # unary upper half always fits in exactly 2n bits.
        assert hi_positions[-1] < 2 * n
        self.low_words = low_words
        self.high = BitVector.from_ones(2 * n, hi_positions, with_select0=with_select0)

    def _low(self, i: int) -> int:
        lw = self.low_width
        if lw == 0:
            return 0
        off = i * lw
        v = self.low_words[off >> 6] >> (off & 63)
        if (off & 63) + lw > WORD_BITS:
            v |= self.low_words[(off >> 6) + 1] << (WORD_BITS - (off & 63))
        return v & ((1 << lw) - 1)

    def prefix(self, i: int) -> int:
        """Sum of values[0..i] inclusive."""
        if not 0 <= i < self.n:
            raise IndexError(f"prefix index {i} outside [0, {self.n})")
        return ((self.high.select1(i) - i) << self.low_width) | self._low(i)

    def access(self, i: int) -> int:
        """values[i], recovered as a difference of adjacent prefix sums."""
        if i == 0:
            return self.prefix(0)
        return self.prefix(i) - self.prefix(i - 1)

    def __len__(self) -> int:
        return self.n

    def payload_bits(self) -> int:
        return self.n * (self.low_width + 2)

    def aux_bits(self) -> int:
        return self.high.aux_bits()

    def to_words(self) -> list[int]:
        return [self.n, self.low_width, len(self.low_words), *self.low_words, *self.high.to_words()]

    @classmethod
    def from_words(cls, it: Iterator[int], *, with_select0: bool = False) -> "EliasFanoArray":
        n = next(it)
        lw = next(it)
        nlow = next(it)
        low_words = [next(it) for _ in range(nlow)]
        high = BitVector.from_words(it, with_select0=with_select0)
        obj = cls.__new__(cls)
        obj.n = n
        obj.low_width = lw
        obj.low_words = low_words
        obj.high = high
        # Recover the running total from the last prefix sum.
        obj.total = obj.prefix(n - 1) if n else 0
        return obj


class IndexableSet:
    """Strictly increasing keys over [0, universe) with rank and select.

    ``rank`` answers "which position does this key hold" and returns
    ``None`` when the key is absent; ``select`` is the inverse.  Keys are
    gap-coded through an EliasFanoArray, so select is two bitvector
    selects and rank is a bucket location plus an O(log bucket) binary
    search of the packed low parts.
    """

    __slots__ = ("size", "universe", "ef")

    def __init__(self, keys: Sequence[int], universe: int):
        if universe < 0:
            raise ValueError(f"universe must be non-negative, got {universe}")
        prev = -1
        for k in keys:
            if k <= prev:
                raise ValueError(f"keys must be strictly increasing, saw {k} after {prev}")
            prev = k
        if keys and keys[-1] >= universe:
            raise ValueError(f"key {keys[-1]} outside universe [0, {universe})")
        self.size = len(keys)
        self.universe = universe
        if self.size:
            gaps = [keys[0]] + [keys[i] - keys[i - 1] for i in range(1, len(keys))]
            self.ef = EliasFanoArray(gaps, with_select0=True)
        else:
            self.ef = None

    def select(self, i: int) -> int:
        if not 0 <= i < self.size:
            raise IndexError(f"select index {i} outside [0, {self.size})")
        return self.ef.prefix(i)

    def _count_high_le(self, h: int) -> int:
        """Number of stored keys whose high part is <= h."""
        high = self.ef.high
        if h >= high.zeros:
            return self.size
        return high.select0(h) - h

    def rank(self, key: int) -> int | None:
        """Position of key among the stored keys, or None if absent."""
        if not 0 <= key < self.universe:
            raise ValueError(f"key {key} outside universe [0, {self.universe})")
        if self.size == 0:
            return None
        lw = self.ef.low_width
        h = key >> lw
        start = self._count_high_le(h - 1) if h else 0
        end = self._count_high_le(h)
        lo = key & ((1 << lw) - 1)
        while start < end:
            mid = (start + end) // 2
            got = self.ef._low(mid)
            if got == lo:
                return mid
            if got < lo:
                start = mid + 1
            else:
                end = mid
        return None

    def __contains__(self, key: int) -> bool:
        return self.rank(key) is not None

    def __len__(self) -> int:
        return self.size

    def payload_bits(self) -> int:
        return self.ef.payload_bits() if self.ef else 0

    def aux_bits(self) -> int:
        return self.ef.aux_bits() if self.ef else 0

    def to_words(self) -> list[int]:
        out = [self.size, self.universe]
        if self.ef is not None:
            out.extend(self.ef.to_words())
        return out

    @classmethod
    def from_words(cls, it: Iterator[int]) -> "IndexableSet":
        size = next(it)
        universe = next(it)
        obj = cls.__new__(cls)
        obj.size = size
        obj.universe = universe
        obj.ef = EliasFanoArray.from_words(it, with_select0=True) if size else None
        return obj
