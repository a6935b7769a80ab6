"""Scanning: stream text through the automaton and report occurrences.

Per consumed character the matcher resolves one advance -- try the goto
transition, falling back along failure parents until a goto exists or
the root is reached -- and then drains the report chain of the landed
state: the state itself if terminal, then every report ancestor down to
the root.  Occurrences come out as (start, end_inclusive, pattern_id),
grouped by end position with longer matches first.

Counter semantics (ScanSummary): ``next_probes`` counts one advance
resolution per consumed character; ``fail_steps`` counts failure-parent
hops.  Every failure hop implies one extra dictionary probe, so the raw
number of transition-dictionary queries is exposed separately as
``transition_queries`` (= next_probes + fail_steps for known symbols).
The classic amortization gives next_probes + fail_steps <= 2 * len(text)
and report_steps <= occurrences + len(text): a character adds at most
one unit of failure potential, and every report hop either emits or
terminates a chain.

Symbols outside the pattern alphabet reset the automaton to the root in
one step; they can never extend a match.

When the optional compiled kernel is importable, scans of flat-backend
indexes run through it transparently (``engine="auto"``); results and
counters are identical to the pure-Python path, which remains the
reference implementation and the only engine for the compressed backend.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Iterable, NamedTuple

from .automaton import SuccinctAcIndex


class Occurrence(NamedTuple):
    start: int
    end: int            # inclusive
    pattern_id: int


@dataclass
class ScanState:
    """Resumable matcher position for chunked scanning."""

    state: int = 0
    step: int = 0  # characters consumed so far, across chunks


@dataclass
class ScanSummary:
    chars: int
    match_count: int
    next_probes: int
    fail_steps: int
    report_steps: int
    transition_queries: int
    engine: str
    matches: list[Occurrence] | None = field(default=None, repr=False)


Sink = Callable[[Occurrence], None]


def _scan_python(idx: SuccinctAcIndex, data: bytes, carry: ScanState, emit: Sink) -> tuple[int, int, int, int]:
    code_of_byte = idx.alphabet.code_of_byte
    lookup = idx.transitions.lookup
    fail_parent = idx.fail_tree.parent
    report_parent = idx.report_tree.parent
    terminal_rank = idx.terminals.rank
    length_of = idx.lengths.access

    state = carry.state
    step = carry.step
    next_probes = fail_steps = report_steps = queries = 0

    for byte in data:
        step += 1
        next_probes += 1
        code = code_of_byte[byte]
        if code < 0:
            # Unknown symbol: no prefix survives, fall to the root outright.
            state = 0
            continue
        while True:
            queries += 1
            nxt = lookup(state, code)
            if nxt is not None:
                state = nxt
                break
            if state == 0:
                break
            state = fail_parent(state)
            fail_steps += 1
        if state == 0:
            continue
        tmp = state
        tid = terminal_rank(tmp)
        if tid is not None:
            length = length_of(tid)
            emit(Occurrence(step - length, step - 1, tid))
        while True:
            tmp = report_parent(tmp)
            report_steps += 1
            if tmp == 0:
                break
            tid = terminal_rank(tmp)
            assert tid is not None, "report chain reached a non-terminal state"
            length = length_of(tid)
            emit(Occurrence(step - length, step - 1, tid))

    carry.state = state
    carry.step = step
    return next_probes, fail_steps, report_steps, queries


def scan(
    idx: SuccinctAcIndex,
    text: bytes,
    sink: Sink | None = None,
    *,
    engine: str = "auto",
    carry: ScanState | None = None,
) -> ScanSummary:
    """Scan a text, feeding occurrences to ``sink`` (or collecting them).

    ``carry`` threads matcher position and step offset across chunked
    calls; ``engine`` is "auto", "python", or "kernel".
    """
    if isinstance(text, str):
        raise TypeError("texts are byte strings; encode before scanning")
    if engine not in ("auto", "python", "kernel"):
        raise ValueError(f"unknown engine {engine!r}")
    data = bytes(text)
    if carry is None:
        carry = ScanState()

    collected: list[Occurrence] | None = None
    if sink is None:
        collected = []
        emit = collected.append
    else:
        emit = sink

    chosen = "python"
    if engine in ("auto", "kernel") and idx.transitions.kind == "flat":
        from . import _kernel
        if _kernel.available():
            chosen = "kernel"
        elif engine == "kernel":
            raise RuntimeError("compiled kernel requested but numba is unavailable")
    elif engine == "kernel":
        raise RuntimeError("compiled kernel only supports the flat transition backend")

    count = 0

    def counting_emit(occ: Occurrence) -> None:
        nonlocal count
        count += 1
        emit(occ)

    if chosen == "kernel":
        from . import _kernel
        next_probes, fail_steps, report_steps, queries = _kernel.scan_into(
            idx, data, carry, counting_emit
        )
    else:
        next_probes, fail_steps, report_steps, queries = _scan_python(
            idx, data, carry, counting_emit
        )

    return ScanSummary(
        chars=len(data),
        match_count=count,
        next_probes=next_probes,
        fail_steps=fail_steps,
        report_steps=report_steps,
        transition_queries=queries,
        engine=chosen,
        matches=collected,
    )


def scan_chunked(
    idx: SuccinctAcIndex,
    chunks: Iterable[bytes],
    sink: Sink | None = None,
    *,
    engine: str = "auto",
) -> ScanSummary:
    """Scan a text delivered in arbitrary pieces.

    Equivalent to scanning the concatenation: matcher state and step
    offsets carry across chunk boundaries, so matches spanning chunks
    are found and positions are global.
    """
    collected: list[Occurrence] | None = None
    if sink is None:
        collected = []
        sink_fn: Sink = collected.append
    else:
        sink_fn = sink

    carry = ScanState()
    chars = count = probes = fails = reports = queries = 0
    engine_used = "python"
    for chunk in chunks:
        part = scan(idx, chunk, sink_fn, engine=engine, carry=carry)
        chars += part.chars
        count += part.match_count
        probes += part.next_probes
        fails += part.fail_steps
        reports += part.report_steps
        queries += part.transition_queries
        if part.chars:
            engine_used = part.engine

    return ScanSummary(
        chars=chars,
        match_count=count,
        next_probes=probes,
        fail_steps=fails,
        report_steps=reports,
        transition_queries=queries,
        engine=engine_used,
        matches=collected,
    )


def find_all(idx: SuccinctAcIndex, text: bytes, *, engine: str = "auto") -> list[Occurrence]:
    """All occurrences of the indexed patterns in the text."""
    summary = scan(idx, text, engine=engine)
    assert summary.matches is not None
    return summary.matches
