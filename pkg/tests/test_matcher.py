"""Scanning behavior: occurrences, counters, chunking, engine parity."""

import random

import pytest

from sdmatch import _kernel
from sdmatch.builder import PatternSet, build_index
from sdmatch.matcher import Occurrence, ScanState, find_all, scan, scan_chunked
from sdmatch.oracle import naive_scan

GOLDEN = [b"ABC", b"B", b"BC", b"CA"]

HAVE_KERNEL = _kernel.available()


def golden_index():
    return build_index(PatternSet(GOLDEN))


def random_case(rng, *, max_count=15, max_len=10, sigma=4, text_len=300):
    alpha = bytes(range(97, 97 + sigma)) if sigma <= 26 else bytes(range(sigma))
    pats = set()
    while len(pats) < rng.randint(1, max_count):
        k = rng.randint(1, max_len)
        pats.add(bytes(rng.choice(alpha) for _ in range(k)))
    pats = sorted(pats)
    # Texts biased toward pattern fragments so matches and failure hops
    # actually happen; plain uniform text rarely exercises either.
    chunks = []
    size = 0
    while size < text_len:
        r = rng.random()
        if r < 0.55:
            p = rng.choice(pats)
            lo = rng.randint(0, len(p) - 1)
            hi = rng.randint(lo + 1, len(p))
            piece = p[lo:hi]
        elif r < 0.9:
            piece = bytes(rng.choice(alpha) for _ in range(rng.randint(1, 6)))
        else:
            piece = bytes([rng.randrange(256)])  # may fall outside the alphabet
        chunks.append(piece)
        size += len(piece)
    return pats, b"".join(chunks)


def as_tuples(occs):
    return [(o.start, o.end, o.pattern_id) for o in occs]


def test_golden_scan():
    idx = golden_index()
    s = scan(idx, b"ABCA", engine="python")
    assert as_tuples(s.matches) == [(1, 1, 1), (0, 2, 3), (1, 2, 2), (2, 3, 0)]
    assert s.chars == 4
    assert s.match_count == 4
    assert s.next_probes == 4
    # Two failure hops happen at the final A: ABC falls to BC, then to C,
    # which extends to CA.
    assert s.fail_steps == 2
    assert s.transition_queries == s.next_probes + s.fail_steps
    assert s.engine == "python"


def test_scan_rejects_str_and_bad_engine():
    idx = golden_index()
    with pytest.raises(TypeError):
        scan(idx, "ABCA")
    with pytest.raises(ValueError):
        scan(idx, b"ABCA", engine="turbo")


def test_empty_text():
    s = scan(golden_index(), b"", engine="python")
    assert s.matches == []
    assert (s.chars, s.next_probes, s.fail_steps, s.report_steps) == (0, 0, 0, 0)


def test_unknown_symbols_reset_to_root():
    idx = golden_index()
    s = scan(idx, b"AB!ABC", engine="python")
    # The ! kills the AB prefix: no match may span it.
    assert as_tuples(s.matches) == [(1, 1, 1), (4, 4, 1), (3, 5, 3), (4, 5, 2)]
    assert s.next_probes == 6
    # Unknown symbols never touch the transition dictionary.
    assert s.transition_queries < s.next_probes + s.fail_steps


def test_occurrences_are_well_formed():
    rng = random.Random(0x0CC5)
    for _ in range(30):
        pats, text = random_case(rng)
        idx = build_index(PatternSet(pats))
        for o in find_all(idx, text, engine="python"):
            assert 0 <= o.start <= o.end < len(text)
            assert text[o.start : o.end + 1] == idx.retrieve_pattern(o.pattern_id)


def test_emission_order_is_end_then_longest_first():
    rng = random.Random(0x0BDE)
    for _ in range(30):
        pats, text = random_case(rng, sigma=3)
        idx = build_index(PatternSet(pats))
        occs = find_all(idx, text, engine="python")
        for a, b in zip(occs, occs[1:]):
            assert a.end <= b.end
            if a.end == b.end:
                assert a.start < b.start  # longer match first


def test_matches_agree_with_oracle():
    rng = random.Random(0x7E57)
    for _ in range(150):
        pats, text = random_case(rng, sigma=rng.choice([2, 3, 4, 26]))
        idx = build_index(PatternSet(pats))
        got = as_tuples(find_all(idx, text, engine="python"))
        assert got == naive_scan(pats, text), (pats, text)


def test_step_bounds_hold():
    # One unit of failure potential per character: advances plus failure
    # hops stay within 2 |T|, and report hops within matches + |T|.
    rng = random.Random(0x2B0D)
    for _ in range(60):
        pats, text = random_case(rng, sigma=rng.choice([2, 3, 4]))
        idx = build_index(PatternSet(pats))
        s = scan(idx, text, engine="python")
        assert s.next_probes == len(text)
        assert s.next_probes + s.fail_steps <= 2 * len(text)
        assert s.report_steps <= s.match_count + len(text)
        assert s.fail_steps <= s.transition_queries <= s.next_probes + s.fail_steps


def test_sink_callback_streams_matches():
    idx = golden_index()
    got = []
    s = scan(idx, b"ABCA", got.append, engine="python")
    assert s.matches is None
    assert as_tuples(got) == [(1, 1, 1), (0, 2, 3), (1, 2, 2), (2, 3, 0)]
    assert s.match_count == 4


def test_carry_resumes_mid_pattern():
    idx = golden_index()
    carry = ScanState()
    first = scan(idx, b"AB", engine="python", carry=carry)
    assert first.matches == [Occurrence(1, 1, 1)]
    second = scan(idx, b"CA", engine="python", carry=carry)
    # ABC and BC finish inside the second chunk; positions stay global.
    assert as_tuples(second.matches) == [(0, 2, 3), (1, 2, 2), (2, 3, 0)]


def test_chunked_equals_single_shot():
    rng = random.Random(0xC4A2)
    for _ in range(40):
        pats, text = random_case(rng, sigma=3, text_len=200)
        idx = build_index(PatternSet(pats))
        whole = scan(idx, text, engine="python")
        cuts = sorted(rng.randrange(len(text) + 1) for _ in range(rng.randint(0, 6)))
        pieces = [text[a:b] for a, b in zip([0] + cuts, cuts + [len(text)])]
        split = scan_chunked(idx, pieces, engine="python")
        assert split.matches == whole.matches
        assert split.chars == whole.chars
        assert (split.next_probes, split.fail_steps, split.report_steps) == (
            whole.next_probes, whole.fail_steps, whole.report_steps,
        )


def test_compressed_backend_scans_identically():
    rng = random.Random(0xCB01)
    for _ in range(25):
        pats, text = random_case(rng, sigma=4, text_len=200)
        flat = build_index(PatternSet(pats), backend="flat")
        comp = build_index(PatternSet(pats), backend="compressed")
        a = scan(flat, text, engine="python")
        b = scan(comp, text, engine="python")
        assert a.matches == b.matches
        assert a.transition_queries == b.transition_queries
        assert b.engine == "python"


def test_kernel_requires_flat_backend():
    comp = build_index(PatternSet(GOLDEN), backend="compressed")
    with pytest.raises(RuntimeError):
        scan(comp, b"ABCA", engine="kernel")


@pytest.mark.skipif(not HAVE_KERNEL, reason="numba not installed")
def test_kernel_golden():
    idx = golden_index()
    s = scan(idx, b"ABCA", engine="kernel")
    assert s.engine == "kernel"
    assert as_tuples(s.matches) == [(1, 1, 1), (0, 2, 3), (1, 2, 2), (2, 3, 0)]
    assert (s.next_probes, s.fail_steps, s.report_steps, s.transition_queries) == (4, 2, 6, 6)


@pytest.mark.skipif(not HAVE_KERNEL, reason="numba not installed")
def test_kernel_matches_reference_engine():
    rng = random.Random(0x6E49)
    for _ in range(80):
        pats, text = random_case(
            rng,
            max_count=20,
            max_len=12,
            sigma=rng.choice([2, 3, 4, 26, 256]),
            text_len=400,
        )
        idx = build_index(PatternSet(pats))
        py = scan(idx, text, engine="python")
        kr = scan(idx, text, engine="kernel")
        assert kr.engine == "kernel"
        assert py.matches == kr.matches, (pats, text)
        assert (py.next_probes, py.fail_steps, py.report_steps, py.transition_queries) == (
            kr.next_probes, kr.fail_steps, kr.report_steps, kr.transition_queries,
        )


@pytest.mark.skipif(not HAVE_KERNEL, reason="numba not installed")
def test_kernel_carry_across_chunks():
    rng = random.Random(0x6E50)
    for _ in range(25):
        pats, text = random_case(rng, sigma=3, text_len=250)
        idx = build_index(PatternSet(pats))
        whole = scan(idx, text, engine="kernel")
        cut = rng.randrange(len(text) + 1)
        split = scan_chunked(idx, [text[:cut], text[cut:]], engine="kernel")
        assert split.matches == whole.matches
        assert (split.fail_steps, split.report_steps) == (whole.fail_steps, whole.report_steps)


@pytest.mark.skipif(not HAVE_KERNEL, reason="numba not installed")
def test_auto_prefers_kernel_for_flat_backend():
    idx = golden_index()
    assert scan(idx, b"ABCA").engine == "kernel"
    comp = build_index(PatternSet(GOLDEN), backend="compressed")
    assert scan(comp, b"ABCA").engine == "python"
