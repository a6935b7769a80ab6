"""Brute-force reference implementations used to cross-check the index.

Everything here trades time for obviousness: the state order is a
materialize-and-sort over reversed prefixes, failure and report parents
try every proper suffix longest-first, and the scanner slides every
pattern over every text position.  These are the independent answers the
real builder and matcher are tested against; they are usable at desk
scale (total pattern length up to around 10**4) and deliberately share
no code with the succinct structures.
"""

from __future__ import annotations

from typing import Sequence


def naive_state_order(patterns: Sequence[bytes]) -> list[bytes]:
    """All distinct prefixes (empty included), sorted by reversed value.

    Comparing reversed strings lexicographically is the suffix-lex order:
    strings are compared from their last character backwards, and a
    proper suffix precedes anything it suffixes.
    """
    prefixes = {b""}
    for pat in patterns:
        for k in range(1, len(pat) + 1):
            prefixes.add(pat[:k])
    return sorted(prefixes, key=lambda p: p[::-1])


def naive_pattern_ids(patterns: Sequence[bytes]) -> dict[bytes, int]:
    """Pattern -> id, where ids follow the suffix-lex order of the set."""
    ordered = sorted(patterns, key=lambda p: p[::-1])
    return {p: i for i, p in enumerate(ordered)}


def naive_failure(order: Sequence[bytes]) -> list[int | None]:
    """Failure parent per state: longest proper suffix present as a prefix.

    ``order`` is the full state list as produced by naive_state_order;
    entry 0 is None (the root has no failure parent).
    """
    index = {p: s for s, p in enumerate(order)}
    out: list[int | None] = [None]
    for p in order[1:]:
        for k in range(1, len(p) + 1):
            s = index.get(p[k:])
            if s is not None:
                out.append(s)
                break
    return out


def naive_report(order: Sequence[bytes], patterns: Sequence[bytes]) -> list[int | None]:
    """Report parent per state: longest proper suffix that is a pattern.

    States whose proper suffixes contain no pattern report 0, attaching
    them to the root of the report forest.
    """
    pats = set(patterns)
    index = {p: s for s, p in enumerate(order)}
    out: list[int | None] = [None]
    for p in order[1:]:
        parent = 0
        for k in range(1, len(p)):
            if p[k:] in pats:
                parent = index[p[k:]]
                break
        out.append(parent)
    return out


def naive_scan(patterns: Sequence[bytes], text: bytes) -> list[tuple[int, int, int]]:
    """Every occurrence as (start, end_inclusive, pattern_id).

    Output is ordered the way the real matcher reports: by end position,
    longer matches first at equal ends.
    """
    ids = naive_pattern_ids(patterns)
    occ: list[tuple[int, int, int]] = []
    for pat, pid in ids.items():
        start = text.find(pat)
        while start != -1:
            occ.append((start, start + len(pat) - 1, pid))
            start = text.find(pat, start + 1)
    occ.sort(key=lambda t: (t[1], t[0]))
    return occ
