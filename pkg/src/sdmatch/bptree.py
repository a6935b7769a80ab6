"""Balanced-parentheses tree encoding with parent queries.

A tree on n nodes is stored as a 2n-bit parenthesis string (1 = open,
0 = close) written by a DFS that visits children in ascending node order.
Construction requires the node numbering to be preorder-consistent: the
DFS must meet node 0, 1, 2, ... in that exact order, which is validated
and refused otherwise.  The suffix-lexicographic state numbering used by
the automaton has this property for both its trees, so a node's parent is
recovered purely positionally:

    parent(i) = rank1(enclose(select1(i)))

``enclose`` is a backward search for the nearest position whose running
excess (opens minus closes, inclusive) drops two below the node's own
open parenthesis.  The search scans the current block bit by bit and
skips earlier blocks through precomputed per-block minima (512-bit
blocks, 8192-bit superblocks), so long jumps cost a handful of word
probes rather than a rescan of the whole prefix.
"""

from __future__ import annotations

import math
from typing import Iterator, Sequence

from .bits import BitVector

EXC_BLOCK = 512
EXC_SUPER = 8192
_BLOCK_MIN_BITS = 16
_SUPER_MIN_BITS = 32


class BpTree:
    """Succinct ordinal tree over a preorder-consistent parent array."""

    __slots__ = ("n", "bv", "_blkmin", "_supmin")

    def __init__(self, parents: Sequence[int | None]):
        n = len(parents)
        if n == 0:
            raise ValueError("tree needs at least one node")
        if parents[0] is not None:
            raise ValueError("node 0 must be the root (parent None)")
        children: list[list[int]] = [[] for _ in range(n)]
        for i in range(1, n):
            p = parents[i]
            if p is None:
                raise ValueError(f"node {i} has no parent; only node 0 may be the root")
            if not 0 <= p < i:
                raise ValueError(f"parent of node {i} must precede it, got {p}")
            children[p].append(i)

        bits = []
        order = []
        stack: list[tuple[int, bool]] = [(0, True)]
        while stack:
            node, entering = stack.pop()
            if entering:
                order.append(node)
                bits.append(1)
                stack.append((node, False))
                for c in reversed(children[node]):
                    stack.append((c, True))
            else:
                bits.append(0)
        if order != list(range(n)):
            raise ValueError("parent array is not preorder-consistent with the numbering")
        self.n = n
        self.bv = BitVector.from_bits(bits)
        self._build_excess_minima()

    @classmethod
    def _from_bitvector(cls, bv: BitVector, n: int) -> "BpTree":
        obj = cls.__new__(cls)
        if bv.length != 2 * n or bv.ones != n:
            raise ValueError("parenthesis payload does not describe an n-node tree")
        obj.n = n
        obj.bv = bv
        obj._build_excess_minima()
        return obj

    def _build_excess_minima(self) -> None:
        bv = self.bv
        blkmin: list[int] = []
        supmin: list[int] = []
        exc = 0
        for start in range(0, bv.length, EXC_BLOCK):
            rel_base = exc
            # Minimum over positions inside the block only; seeding with the
            # entry excess would absorb a phantom value the block never
            # reaches and break the backward search's hit promise.
            lo = exc + 2
            end = min(start + EXC_BLOCK, bv.length)
            w = start >> 6
            pos = start
            while pos < end:
                word = bv.words[w]
                top = min(end - pos, 64)
                for b in range(top):
                    exc += 1 if (word >> b) & 1 else -1
                    if exc < lo:
                        lo = exc
                w += 1
                pos += 64
            blkmin.append(lo - rel_base)
            sb = start // EXC_SUPER
            if sb == len(supmin):
                supmin.append(lo)
            elif lo < supmin[sb]:
                supmin[sb] = lo
        self._blkmin = blkmin
        self._supmin = supmin

    # -- queries -----------------------------------------------------------

    def _excess_before(self, pos: int) -> int:
        return 2 * self.bv.rank1(pos) - pos

    def _scan_backward(self, hi: int, lo: int, exc_hi: int, target: int) -> int | None:
        """Rightmost j in [lo, hi] with inclusive excess == target, else None."""
        words = self.bv.words
        j = hi
        cur = exc_hi
        while j >= lo:
            if cur == target:
                return j
            cur -= 1 if (words[j >> 6] >> (j & 63)) & 1 else -1
            j -= 1
        return None

    def parent(self, i: int) -> int | None:
        """Parent of node i in the stored tree, None for the root."""
        if not 0 <= i < self.n:
            raise IndexError(f"node {i} outside [0, {self.n})")
        if i == 0:
            return None
        p = self.bv.select1(i)
        # i set bits precede position p, so excess_before(p) is 2i - p.
        target = 2 * i - p - 1
        if target == 0:
            return 0
        # Backward search: partial current block first, then block skipping.
        blk = p >> 9
        j = self._scan_backward(p - 1, blk << 9, 2 * i - p, target)
        if j is None:
            j = self._bwdsearch_blocks(blk, target)
        return self.bv.rank1(j + 1)

    def _bwdsearch_blocks(self, from_block: int, target: int) -> int:
        b = from_block - 1
        sb = from_block // (EXC_SUPER // EXC_BLOCK)
        blocks_per_super = EXC_SUPER // EXC_BLOCK
        while b >= 0:
            sb_of_b = b // blocks_per_super
            if sb_of_b < sb and self._supmin[sb_of_b] > target:
                # Whole superblock stays above the target: skip it.
                b = sb_of_b * blocks_per_super - 1
                continue
            base = self._excess_before(b << 9)
            if base + self._blkmin[b] <= target:
                hi = (b << 9) + EXC_BLOCK - 1
                j = self._scan_backward(hi, b << 9, self._excess_before(hi + 1), target)
                assert j is not None, "block minimum promised a hit"
                return j
            b -= 1
        raise AssertionError("no enclosing open parenthesis; tree encoding corrupt")

    def degree_counts(self) -> dict[int, int]:
        """Histogram: number of nodes per child count."""
        counts: dict[int, int] = {}
        stack: list[int] = []
        bv = self.bv
        for pos in range(bv.length):
            if (bv.words[pos >> 6] >> (pos & 63)) & 1:
                stack.append(0)
            else:
                deg = stack.pop()
                counts[deg] = counts.get(deg, 0) + 1
                if stack:
                    stack[-1] += 1
        return counts

    def __len__(self) -> int:
        return self.n

    # -- space accounting ------------------------------------------------------

    def payload_bits(self) -> int:
        return 2 * self.n

    def aux_bits(self) -> int:
        return (
            self.bv.aux_bits()
            + len(self._blkmin) * _BLOCK_MIN_BITS
            + len(self._supmin) * _SUPER_MIN_BITS
        )

    # -- serialization -----------------------------------------------------------

    def to_words(self) -> list[int]:
        return [self.n, *self.bv.to_words()]

    @classmethod
    def from_words(cls, it: Iterator[int]) -> "BpTree":
        n = next(it)
        bv = BitVector.from_words(it)
        return cls._from_bitvector(bv, n)


def degree_entropy(tree: BpTree) -> float:
    """Degree-distribution entropy of the tree, in bits per node.

    With n_k nodes of child count k this is sum((n_k/n) * log2(n/n_k)),
    the zeroth-order entropy of the degree sequence.
    """
    counts = tree.degree_counts()
    n = tree.n
    h = 0.0
    for c in counts.values():
        h += (c / n) * math.log2(n / c)
    return h
