"""The succinct dictionary-matching automaton and its query operations.

States are the distinct prefixes of the pattern set, numbered in
suffix-lexicographic order (prefixes compared from their last character
backwards); the empty prefix is state 0.  The index never stores the
prefixes themselves.  Everything is recovered positionally from four
structures:

* a transition dictionary holding one packed pair ``(char << state_bits)
  | parent_state`` per non-root state, whose ranks satisfy
  ``rank(pair(s)) + 1 == s`` -- so goto transitions are rank queries and
  pattern retrieval walks select queries;
* the failure tree (parent = longest proper suffix among the prefixes)
  and the report tree (parent = longest proper suffix among the whole
  patterns, forest roots attached to state 0), both balanced-parentheses
  coded because their DFS preorders coincide with the state numbering;
* the terminal-state set (rank gives the pattern id, select inverts) and
  the per-id pattern lengths, Elias-Fano coded.

``space_report`` returns measured payload and directory overhead per
component next to the closed-form sizes the design targets.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Sequence

from .bits import EliasFanoArray, IndexableSet, ceil_log2
from .bptree import BpTree, degree_entropy

FORMAT_VERSION = 1

# Nominal header cost reported under "metadata": magic, version, flags,
# and the five shape fields (m, d, n, sigma, state_bits) at word width.
_METADATA_BITS = 7 * 64


class AlphabetMap:
    """Dense recoding of the byte values that actually occur in patterns.

    Dense codes are assigned in increasing byte order, so comparisons of
    dense codes agree with comparisons of raw bytes.  Bytes outside the
    pattern alphabet map to -1.
    """

    __slots__ = ("byte_of_code", "code_of_byte", "sigma")

    def __init__(self, used_bytes: Iterable[int]):
        values = sorted(set(used_bytes))
        if not values:
            raise ValueError("alphabet must contain at least one byte value")
        if values[0] < 0 or values[-1] > 255:
            raise ValueError("alphabet entries must be byte values")
        self.byte_of_code = values
        self.sigma = len(values)
        self.code_of_byte = [-1] * 256
        for code, b in enumerate(values):
            self.code_of_byte[b] = code

    def encode(self, byte: int) -> int:
        return self.code_of_byte[byte]

    def payload_bits(self) -> int:
        return 8 * self.sigma

    def to_words(self) -> list[int]:
        words = [self.sigma]
        packed = 0
        for i, b in enumerate(self.byte_of_code):
            packed |= b << ((i % 8) * 8)
            if i % 8 == 7:
                words.append(packed)
                packed = 0
        if self.sigma % 8:
            words.append(packed)
        return words

    @classmethod
    def from_words(cls, it: Iterator[int]) -> "AlphabetMap":
        sigma = next(it)
        values = []
        word = 0
        for i in range(sigma):
            if i % 8 == 0:
                word = next(it)
            values.append((word >> ((i % 8) * 8)) & 0xFF)
        return cls(values)


class FlatTransitions:
    """Transition dictionary as one indexable set of packed pairs."""

    kind = "flat"

    __slots__ = ("pairs", "state_bits", "sigma")

    def __init__(self, keys: Sequence[int], sigma: int, state_bits: int):
        self.sigma = sigma
        self.state_bits = state_bits
        self.pairs = IndexableSet(keys, sigma << state_bits)

    @property
    def count(self) -> int:
        return len(self.pairs)

    def lookup(self, state: int, code: int) -> int | None:
        """Target of the goto transition, or None when undefined."""
        r = self.pairs.rank((code << self.state_bits) | state)
        return None if r is None else r + 1

    def select_pair(self, r: int) -> tuple[int, int]:
        """The rank-r packed pair, unpacked to (code, source_state)."""
        key = self.pairs.select(r)
        return key >> self.state_bits, key & ((1 << self.state_bits) - 1)

    def char_counts(self) -> list[int]:
        counts = [0] * self.sigma
        for r in range(self.count):
            counts[self.pairs.select(r) >> self.state_bits] += 1
        return counts

    def payload_bits(self) -> int:
        return self.pairs.payload_bits()

    def aux_bits(self) -> int:
        return self.pairs.aux_bits()

    def to_words(self) -> list[int]:
        return [self.sigma, self.state_bits, *self.pairs.to_words()]

    @classmethod
    def from_words(cls, it: Iterator[int]) -> "FlatTransitions":
        sigma = next(it)
        state_bits = next(it)
        obj = cls.__new__(cls)
        obj.sigma = sigma
        obj.state_bits = state_bits
        obj.pairs = IndexableSet.from_words(it)
        return obj


@dataclass
class SpaceComponent:
    name: str
    payload_bits: int
    aux_bits: int

    @property
    def total_bits(self) -> int:
        return self.payload_bits + self.aux_bits


@dataclass
class SpaceReport:
    """Measured index size, per component, next to the design formulas."""

    m: int
    d: int
    n: int
    sigma: int
    backend: str
    components: list[SpaceComponent]
    h0_transitions: float
    h_star_report: float

    @property
    def payload_total(self) -> int:
        return sum(c.payload_bits for c in self.components)

    @property
    def aux_total(self) -> int:
        return sum(c.aux_bits for c in self.components)

    @property
    def total_bits(self) -> int:
        return self.payload_total + self.aux_total

    @property
    def target_total_bits(self) -> float:
        """Design target: m(log2 sigma + 3.443) + 3 d log2(n/d)."""
        lg_sigma = math.log2(self.sigma) if self.sigma > 1 else 0.0
        ratio = self.n / self.d
        return self.m * (lg_sigma + 3.443) + 3 * self.d * (math.log2(ratio) if ratio > 1 else 0.0)

    @property
    def text_entropy_bits(self) -> float | None:
        """n * log2 sigma: the plain coded size of the pattern text."""
        if self.sigma <= 1:
            return None
        return self.n * math.log2(self.sigma)

    @property
    def bits_per_symbol_ratio(self) -> float | None:
        """Measured total over n*log2(sigma); None for unary alphabets."""
        base = self.text_entropy_bits
        if not base:
            return None
        return self.total_bits / base

    def component(self, name: str) -> SpaceComponent:
        for c in self.components:
            if c.name == name:
                return c
        raise KeyError(name)


class SuccinctAcIndex:
    """A built dictionary-matching index over one pattern set."""

    __slots__ = (
        "alphabet", "m", "n", "d", "state_bits",
        "transitions", "fail_tree", "report_tree", "terminals", "lengths",
        "_kernel_cache",
    )

    def __init__(
        self,
        alphabet: AlphabetMap,
        m: int,
        n: int,
        d: int,
        state_bits: int,
        transitions,
        fail_tree: BpTree,
        report_tree: BpTree,
        terminals: IndexableSet,
        lengths: EliasFanoArray,
    ):
        if state_bits != ceil_log2(m):
            raise ValueError(f"state_bits {state_bits} does not match m={m}")
        if fail_tree.n != m or report_tree.n != m:
            raise ValueError("tree sizes disagree with the state count")
        if len(terminals) != d or len(lengths) != d:
            raise ValueError("terminal store sizes disagree with the pattern count")
        if transitions.count != m - 1:
            raise ValueError("transition count must be m - 1")
        self.alphabet = alphabet
        self.m = m
        self.n = n
        self.d = d
        self.state_bits = state_bits
        self.transitions = transitions
        self.fail_tree = fail_tree
        self.report_tree = report_tree
        self.terminals = terminals
        self.lengths = lengths
        self._kernel_cache = None

    @property
    def sigma(self) -> int:
        return self.alphabet.sigma

    # -- state-level queries ------------------------------------------------

    def _check_state(self, s: int, *, allow_root: bool = True) -> None:
        lo = 0 if allow_root else 1
        if not lo <= s < self.m:
            raise ValueError(f"state {s} outside [{lo}, {self.m})")

    def next_state(self, s: int, code: int) -> int | None:
        """Goto transition on a dense character code, None if undefined."""
        self._check_state(s)
        if not 0 <= code < self.sigma:
            raise ValueError(f"dense code {code} outside [0, {self.sigma})")
        return self.transitions.lookup(s, code)

    def fail_state(self, s: int) -> int:
        """Failure parent: the longest proper suffix state.  s >= 1."""
        self._check_state(s, allow_root=False)
        return self.fail_tree.parent(s)

    def report_state(self, s: int) -> int:
        """Report parent: longest proper suffix that is a whole pattern.

        Returns 0 when no pattern remains below s in the report forest.
        """
        self._check_state(s, allow_root=False)
        return self.report_tree.parent(s)

    def terminal_id(self, s: int) -> int | None:
        """Pattern id if s is a terminal state, else None."""
        self._check_state(s)
        return self.terminals.rank(s)

    def pattern_length(self, pattern_id: int) -> int:
        if not 0 <= pattern_id < self.d:
            raise ValueError(f"pattern id {pattern_id} outside [0, {self.d})")
        return self.lengths.access(pattern_id)

    # -- pattern retrieval -----------------------------------------------------

    def retrieve_pattern(self, pattern_id: int) -> bytes:
        """Reconstruct the pattern text for an id from the index alone."""
        return self._retrieve_counted(pattern_id)[0]

    def _retrieve_counted(self, pattern_id: int) -> tuple[bytes, int]:
        """Retrieval plus the number of select queries it spent.

        One select finds the terminal state; each further select unpacks
        one transition pair, yielding one character, until the walk hits
        the root.  The count is therefore exactly len(pattern) + 1.
        """
        if not 0 <= pattern_id < self.d:
            raise ValueError(f"pattern id {pattern_id} outside [0, {self.d})")
        s = self.terminals.select(pattern_id)
        selects = 1
        out = bytearray()
        byte_of_code = self.alphabet.byte_of_code
        while s != 0:
            code, s = self.transitions.select_pair(s - 1)
            selects += 1
            out.append(byte_of_code[code])
        out.reverse()
        return bytes(out), selects

    def patterns(self) -> list[bytes]:
        """All patterns, by id."""
        return [self.retrieve_pattern(i) for i in range(self.d)]

    # -- space accounting ---------------------------------------------------------

    def space_report(self) -> SpaceReport:
        counts = self.transitions.char_counts()
        total = sum(counts)
        h0 = 0.0
        for t in counts:
            if t:
                h0 += (t / total) * math.log2(total / t)
        components = [
            SpaceComponent("transitions", self.transitions.payload_bits(), self.transitions.aux_bits()),
            SpaceComponent("failure-tree", self.fail_tree.payload_bits(), self.fail_tree.aux_bits()),
            SpaceComponent("report-tree", self.report_tree.payload_bits(), self.report_tree.aux_bits()),
            SpaceComponent("terminals", self.terminals.payload_bits(), self.terminals.aux_bits()),
            SpaceComponent("lengths", self.lengths.payload_bits(), self.lengths.aux_bits()),
            SpaceComponent("alphabet", self.alphabet.payload_bits(), 0),
            SpaceComponent("metadata", _METADATA_BITS, 0),
        ]
        return SpaceReport(
            m=self.m, d=self.d, n=self.n, sigma=self.sigma,
            backend=self.transitions.kind,
            components=components,
            h0_transitions=h0,
            h_star_report=degree_entropy(self.report_tree),
        )
