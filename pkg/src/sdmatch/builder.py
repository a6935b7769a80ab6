"""Index construction: from a validated pattern set to a queryable index.

The construction pipeline is

    PatternSet -> suffix_lex_order -> PrefixTable -> build_index

and works in O(n log n) for total pattern length n:

1. Insert the patterns into an explicit trie (one node per distinct
   prefix, m nodes total).
2. Number the nodes in suffix-lexicographic order.  A prefix reversed is
   a suffix of the reversed pattern, so sorting the suffixes of the
   sentinel-separated concatenation of all reversed patterns -- a plain
   prefix-doubling suffix array -- enumerates the prefixes in exactly the
   right order; the trie deduplicates prefixes shared between patterns.
   The sentinel sorts below every character, which makes a proper suffix
   precede every string it suffixes, as the order requires.
3. Read the transition pairs off the trie edges.  Their packed keys must
   come out strictly increasing (the rank law the matcher relies on);
   this is asserted, not assumed.
4. Compute failure parents by the textbook breadth-first walk (follow
   the parent's failure chain until a goto edge matches), then report
   parents in one pass: the failure parent if it is terminal, else its
   report parent.

Both parent arrays must be preorder-consistent with the numbering --
the BpTree constructor refuses them otherwise, which is a real build
invariant and not just an encoding detail.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

from .automaton import AlphabetMap, FlatTransitions, SuccinctAcIndex
from .bits import EliasFanoArray, IndexableSet, ceil_log2
from .bptree import BpTree
from .compressed import CompressedTransitions


@dataclass(frozen=True)
class PatternSet:
    """The dictionary to index: distinct, non-empty byte strings."""

    patterns: tuple[bytes, ...]

    def __init__(self, patterns: Sequence[bytes]):
        pats = []
        seen: dict[bytes, int] = {}
        for i, p in enumerate(patterns):
            if isinstance(p, str):
                raise TypeError(f"pattern {i} is str; patterns must be bytes")
            p = bytes(p)
            if not p:
                raise ValueError(f"pattern {i} is empty")
            if p in seen:
                raise ValueError(f"pattern {i} duplicates pattern {seen[p]}: {p!r}")
            seen[p] = i
            pats.append(p)
        if not pats:
            raise ValueError("pattern set is empty")
        object.__setattr__(self, "patterns", tuple(pats))

    @property
    def d(self) -> int:
        return len(self.patterns)

    @property
    def n(self) -> int:
        return sum(len(p) for p in self.patterns)


@dataclass
class PrefixTable:
    """Per-state skeleton of the automaton, in suffix-lex numbering.

    State 0 is the empty prefix; ``parent_state[s]`` and ``last_code[s]``
    spell state s as its parent prefix extended by one dense character.
    ``children`` inverts that map for the breadth-first failure walk.
    """

    m: int
    n: int
    d: int
    state_bits: int
    alphabet: AlphabetMap
    parent_state: list[int]          # entry 0 unused (root)
    last_code: list[int]             # entry 0 unused (root)
    length: list[int]                # prefix length per state, 0 at root
    terminal_states: list[int]       # sorted; rank here == pattern id
    lengths_by_id: list[int]
    children: dict[tuple[int, int], int] = field(repr=False, default_factory=dict)

    def prefix_bytes(self, s: int) -> bytes:
        """Reconstruct the prefix a state stands for (testing aid)."""
        out = bytearray()
        while s != 0:
            out.append(self.alphabet.byte_of_code[self.last_code[s]])
            s = self.parent_state[s]
        out.reverse()
        return bytes(out)


def _suffix_array(seq: list[int]) -> list[int]:
    """Suffix order of an integer sequence by prefix doubling."""
    n = len(seq)
    if n == 1:
        return [0]
    rank = list(seq)
    sa = list(range(n))
    k = 1
    while True:
        keys = [(rank[i], rank[i + k] if i + k < n else -1) for i in range(n)]
        sa.sort(key=keys.__getitem__)
        fresh = [0] * n
        r = 0
        fresh[sa[0]] = 0
        for j in range(1, n):
            if keys[sa[j]] != keys[sa[j - 1]]:
                r += 1
            fresh[sa[j]] = r
        rank = fresh
        if r == n - 1:
            return sa
        k <<= 1


class _Trie:
    """Plain pointer trie; only alive during construction."""

    __slots__ = ("children", "parent", "pcode", "depth")

    def __init__(self) -> None:
        self.children: list[dict[int, int]] = [{}]
        self.parent: list[int] = [-1]
        self.pcode: list[int] = [-1]
        self.depth: list[int] = [0]

    def insert_path(self, codes: Sequence[int]) -> list[int]:
        """Walk/extend the trie along codes; return the node path."""
        node = 0
        path = [0]
        for c in codes:
            nxt = self.children[node].get(c)
            if nxt is None:
                nxt = len(self.parent)
                self.children[node][c] = nxt
                self.children.append({})
                self.parent.append(node)
                self.pcode.append(c)
                self.depth.append(self.depth[node] + 1)
            node = nxt
            path.append(node)
        return path

    def __len__(self) -> int:
        return len(self.parent)


def suffix_lex_order(ps: PatternSet) -> PrefixTable:
    """Number every distinct prefix in suffix-lexicographic order."""
    alphabet = AlphabetMap(b for p in ps.patterns for b in p)
    encode = alphabet.code_of_byte

    trie = _Trie()
    paths = [trie.insert_path([encode[b] for b in p]) for p in ps.patterns]
    m = len(trie)
    state_bits = ceil_log2(m)

    # Sentinel-separated concatenation of the reversed patterns; dense
    # codes shifted by one so the sentinel 0 sorts first.
    seq: list[int] = []
    block_end: list[int] = []  # per pattern: index one past its last char
    for p in ps.patterns:
        for b in reversed(p):
            seq.append(encode[b] + 1)
        block_end.append(len(seq))
        seq.append(0)

    starts = [end - len(p) for end, p in zip(block_end, ps.patterns)]
    owner = [-1] * len(seq)  # pattern owning each non-sentinel position
    for i, (s, e) in enumerate(zip(starts, block_end)):
        for g in range(s, e):
            owner[g] = i

    state_of_node = [-1] * m
    state_of_node[0] = 0
    next_state = 1
    for g in _suffix_array(seq):
        i = owner[g]
        if i < 0:
            continue  # suffix starting at a sentinel
        # The suffix of reversed pattern i starting at g spells the
        # prefix of pattern i of this length:
        length = block_end[i] - g
        node = paths[i][length]
        if state_of_node[node] < 0:
            state_of_node[node] = next_state
            next_state += 1
    if next_state != m:
        raise AssertionError("state numbering did not cover the trie")

    parent_state = [0] * m
    last_code = [0] * m
    length = [0] * m
    children: dict[tuple[int, int], int] = {}
    for node in range(1, m):
        s = state_of_node[node]
        ps_ = state_of_node[trie.parent[node]]
        parent_state[s] = ps_
        last_code[s] = trie.pcode[node]
        length[s] = trie.depth[node]
        children[(ps_, trie.pcode[node])] = s

    end_states = [state_of_node[paths[i][-1]] for i in range(ps.d)]
    terminal_states = sorted(end_states)
    id_of_end_state = {s: i for i, s in enumerate(terminal_states)}
    lengths_by_id = [0] * ps.d
    for i, p in enumerate(ps.patterns):
        lengths_by_id[id_of_end_state[end_states[i]]] = len(p)

    return PrefixTable(
        m=m, n=ps.n, d=ps.d, state_bits=state_bits, alphabet=alphabet,
        parent_state=parent_state, last_code=last_code, length=length,
        terminal_states=terminal_states, lengths_by_id=lengths_by_id,
        children=children,
    )


def build_transition_pairs(pt: PrefixTable) -> list[int]:
    """Packed (code << state_bits) | parent_state keys, in state order.

    The defining property of the numbering is that these keys are
    strictly increasing, i.e. rank(pair(s)) + 1 == s in the transition
    dictionary.  A violation means the ordering step is broken.
    """
    keys = []
    prev = -1
    for s in range(1, pt.m):
        key = (pt.last_code[s] << pt.state_bits) | pt.parent_state[s]
        if key <= prev:
            raise AssertionError(f"transition keys not increasing at state {s}")
        keys.append(key)
        prev = key
    return keys


def build_failure_parents(pt: PrefixTable) -> list[int | None]:
    """Failure parent per state: the longest proper suffix state.

    Breadth-first over prefix length; each state chases its parent's
    failure chain until a goto edge on its own last character exists.
    """
    fail: list[int | None] = [None] * pt.m
    order = sorted(range(1, pt.m), key=pt.length.__getitem__)
    children = pt.children
    for s in order:
        u = pt.parent_state[s]
        c = pt.last_code[s]
        if u == 0:
            fail[s] = 0
            continue
        f = fail[u]
        while True:
            nxt = children.get((f, c))
            if nxt is not None:
                fail[s] = nxt
                break
            if f == 0:
                fail[s] = 0
                break
            f = fail[f]
    for s in range(1, pt.m):
        if not 0 <= fail[s] < s:
            raise AssertionError(f"failure parent of state {s} does not precede it")
    return fail


def build_report_parents(pt: PrefixTable, fail: Sequence[int | None]) -> list[int | None]:
    """Report parent per state: longest proper suffix that is a pattern.

    One pass in state order suffices because failure parents precede
    their states.  Non-pattern suffix chains collapse to 0, attaching
    those states to the root of the report forest.
    """
    terminal = set(pt.terminal_states)
    report: list[int | None] = [None] * pt.m
    for s in range(1, pt.m):
        f = fail[s]
        report[s] = f if (f in terminal or f == 0) else report[f]
    for s in range(1, pt.m):
        r = report[s]
        if not 0 <= r < s:
            raise AssertionError(f"report parent of state {s} does not precede it")
        if r != 0 and r not in terminal:
            raise AssertionError(f"report parent {r} of state {s} is not terminal")
    return report


def build_index(ps: PatternSet | Sequence[bytes], *, backend: str = "flat") -> SuccinctAcIndex:
    """Construct a queryable index for a pattern set.

    backend selects the transition layout: "flat" for the single packed
    dictionary, "compressed" for the character-partitioned store.
    """
    if not isinstance(ps, PatternSet):
        ps = PatternSet(ps)
    if backend not in ("flat", "compressed"):
        raise ValueError(f"unknown backend {backend!r}")

    pt = suffix_lex_order(ps)
    keys = build_transition_pairs(pt)
    fail = build_failure_parents(pt)
    report = build_report_parents(pt, fail)

    if backend == "flat":
        transitions = FlatTransitions(keys, pt.alphabet.sigma, pt.state_bits)
    else:
        transitions = CompressedTransitions.build(keys, pt.alphabet.sigma, pt.state_bits, pt.m)

    return SuccinctAcIndex(
        alphabet=pt.alphabet,
        m=pt.m, n=pt.n, d=pt.d, state_bits=pt.state_bits,
        transitions=transitions,
        fail_tree=BpTree(fail),
        report_tree=BpTree(report),
        terminals=IndexableSet(pt.terminal_states, pt.m),
        lengths=EliasFanoArray(pt.lengths_by_id),
    )
