"""Character-partitioned transition backend with zeroth-order compression.

The flat backend stores every packed pair in one dictionary over the
universe sigma * 2**state_bits.  Splitting the pairs by character drops
the character bits entirely: per character c we keep the set I[c] of
source states that move on c (universe m), plus an offset table

    T[c] = 1 + number of pairs whose character precedes c,

which is the rank the first c-transition would have in the flat
dictionary, plus one.  A goto lookup becomes

    next(s, c) = T[c] + rank_of_s_in_I[c],

undefined whenever s is absent from I[c].  The per-character sets cost
about t_c * (log2(m / t_c) + 2) bits each, so the whole store lands
within m * (H0 + 3) bits of the empirical character entropy H0 of the
transition multiset -- skewed alphabets compress, uniform ones tie the
flat layout.  Characters that label no transition keep the offset of the
next used character so the table stays monotone.
"""

from __future__ import annotations

import math
from typing import Iterator, Sequence

from .bits import IndexableSet, ceil_log2


def h0_entropy(counts: Sequence[int]) -> float:
    """Zeroth-order entropy, in bits per item, of a count vector."""
    total = sum(counts)
    if total == 0:
        return 0.0
    h = 0.0
    for t in counts:
        if t < 0:
            raise ValueError(f"negative count {t}")
        if t:
            h += (t / total) * math.log2(total / t)
    return h


class CompressedTransitions:
    """Per-character transition sets plus the offset table."""

    kind = "compressed"

    __slots__ = ("sigma", "state_bits", "m", "offsets", "by_char")

    def __init__(self, sigma: int, state_bits: int, m: int,
                 offsets: Sequence[int], by_char: Sequence[IndexableSet]):
        if len(offsets) != sigma or len(by_char) != sigma:
            raise ValueError("need one offset and one state set per character")
        self.sigma = sigma
        self.state_bits = state_bits
        self.m = m
        self.offsets = list(offsets)
        self.by_char = list(by_char)

    @classmethod
    def build(cls, keys: Sequence[int], sigma: int, state_bits: int, m: int) -> "CompressedTransitions":
        """Partition packed (char << state_bits | state) keys by character."""
        states_of: list[list[int]] = [[] for _ in range(sigma)]
        mask = (1 << state_bits) - 1
        for key in keys:
            states_of[key >> state_bits].append(key & mask)
        offsets = [0] * sigma
        run = 1
        for c in range(sigma):
            offsets[c] = run
            run += len(states_of[c])
        by_char = [IndexableSet(states, m) for states in states_of]
        return cls(sigma, state_bits, m, offsets, by_char)

    @property
    def count(self) -> int:
        return sum(len(s) for s in self.by_char)

    def lookup(self, state: int, code: int) -> int | None:
        r = self.by_char[code].rank(state)
        return None if r is None else self.offsets[code] + r

    def select_pair(self, r: int) -> tuple[int, int]:
        """The rank-r pair of the flat ordering, unpacked to (code, state).

        Pairs sort by (character, state), so the character owning global
        rank r is found through the offset table and the state by a
        select inside that character's set.
        """
        if not 0 <= r < self.count:
            raise IndexError(f"pair rank {r} outside [0, {self.count})")
        target = r + 1  # offsets store ranks shifted by one
        lo, hi = 0, self.sigma - 1
        while lo < hi:
            mid = (lo + hi + 1) // 2
            if self.offsets[mid] <= target:
                lo = mid
            else:
                hi = mid - 1
        code = lo
        return code, self.by_char[code].select(target - self.offsets[code])

    def char_counts(self) -> list[int]:
        return [len(s) for s in self.by_char]

    def payload_bits(self) -> int:
        """Per-character set payloads plus the offset table at log2(m) width."""
        return sum(s.payload_bits() for s in self.by_char) + self.sigma * ceil_log2(self.m)

    def aux_bits(self) -> int:
        return sum(s.aux_bits() for s in self.by_char)

    def to_words(self) -> list[int]:
        words = [self.sigma, self.state_bits, self.m]
        words.extend(self.offsets)
        for s in self.by_char:
            words.extend(s.to_words())
        return words

    @classmethod
    def from_words(cls, it: Iterator[int]) -> "CompressedTransitions":
        sigma = next(it)
        state_bits = next(it)
        m = next(it)
        offsets = [next(it) for _ in range(sigma)]
        by_char = [IndexableSet.from_words(it) for _ in range(sigma)]
        return cls(sigma, state_bits, m, offsets, by_char)
