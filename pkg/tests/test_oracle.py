"""Sanity checks for the brute-force reference scanner.

The oracle is what everything else is judged against, so it gets its own
small set of hand-checked cases.
"""

from sdmatch.oracle import naive_pattern_ids, naive_scan


def test_single_pattern_positions():
    assert naive_scan([b"ab"], b"xabab") == [(1, 2, 0), (3, 4, 0)]


def test_overlapping_occurrences_are_all_reported():
    assert naive_scan([b"AA"], b"AAA") == [(0, 1, 0), (1, 2, 0)]


def test_ids_follow_suffix_lex_order_not_input_order():
    # "CA" reversed is "AC", "ABC" reversed is "CBA": ids sort by reversal.
    ids = naive_pattern_ids([b"ABC", b"B", b"BC", b"CA"])
    assert ids == {b"CA": 0, b"B": 1, b"BC": 2, b"ABC": 3}


def test_ordering_by_end_then_longest_first():
    # At end position 2 both "ABC" (start 0) and "BC" (start 1) finish;
    # the longer one, i.e. the smaller start, must come first.
    occ = naive_scan([b"ABC", b"B", b"BC", b"CA"], b"ABCA")
    assert occ == [(1, 1, 1), (0, 2, 3), (1, 2, 2), (2, 3, 0)]
    ends = [e for _, e, _ in occ]
    assert ends == sorted(ends)


def test_empty_text_and_no_matches():
    assert naive_scan([b"abc"], b"") == []
    assert naive_scan([b"abc"], b"xyxyxy") == []


def test_pattern_equal_to_text():
    assert naive_scan([b"xyz"], b"xyz") == [(0, 2, 0)]
