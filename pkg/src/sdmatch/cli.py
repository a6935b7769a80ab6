"""Command-line interface.

Subcommands:

    build      index a pattern file (lines by default, --binary records)
    scan       stream a text through an index, TSV occurrences to stdout
    stats      print the space report of an index
    retrieve   reconstruct pattern text from the index alone
    verify     differential test: both backends against the naive scanner
    bench      throughput measurement, optionally checking linear scaling

Exit codes: 0 success, 1 verification mismatch, 2 invalid input
(duplicate or empty patterns, bad ids, bad arguments), 3 unreadable or
corrupt index file.
"""

from __future__ import annotations

import argparse
import random
import sys
import time
from typing import Sequence

from .builder import PatternSet, build_index
from .matcher import ScanState, scan
from .oracle import naive_scan
from .storage import IndexFormatError, load_index, save_index

_CHUNK = 1 << 20


def _fail(msg: str, code: int) -> int:
    print(f"sdmatch: {msg}", file=sys.stderr)
    return code


def _read_patterns(path: str, binary: bool = False) -> list[bytes] | int:
    """Pattern list from a file, or an exit code on bad content.

    The default format is one pattern per line.  With binary=True the file
    is a sequence of records, each a 64-bit little-endian byte count
    followed by that many pattern bytes; records may contain newlines.
    """
    try:
        with open(path, "rb") as f:
            raw = f.read()
    except OSError as exc:
        return _fail(f"cannot read patterns: {exc}", 2)
    if binary:
        unit = "record"
        items: list[bytes] = []
        pos = 0
        while pos < len(raw):
            if pos + 8 > len(raw):
                return _fail(f"binary pattern file truncated at byte {pos}", 2)
            size = int.from_bytes(raw[pos : pos + 8], "little")
            pos += 8
            if size > len(raw) - pos:
                return _fail(
                    f"binary record {len(items) + 1} claims {size} bytes "
                    f"but only {len(raw) - pos} remain", 2)
            items.append(raw[pos : pos + size])
            pos += size
    else:
        unit = "line"
        items = raw.split(b"\n")
        if items and items[-1] == b"":
            items.pop()  # trailing newline
    if not items:
        return _fail("pattern file is empty", 2)
    seen: dict[bytes, int] = {}
    for i, item in enumerate(items, start=1):
        if not item:
            return _fail(f"pattern on {unit} {i} is empty", 2)
        if item in seen:
            return _fail(f"pattern on {unit} {i} duplicates {unit} {seen[item]}", 2)
        seen[item] = i
    return items


def _load(path: str):
    try:
        return load_index(path)
    except (OSError, IndexFormatError) as exc:
        return _fail(f"cannot load index: {exc}", 3)


def cmd_build(args: argparse.Namespace) -> int:
    patterns = _read_patterns(args.patterns, args.binary)
    if isinstance(patterns, int):
        return patterns
    idx = build_index(PatternSet(patterns), backend=args.backend)
    try:
        save_index(idx, args.output)
    except OSError as exc:
        return _fail(f"cannot write index: {exc}", 2)
    rep = idx.space_report()
    print(
        f"indexed {idx.d} patterns: n={idx.n} m={idx.m} sigma={idx.sigma} "
        f"backend={args.backend} size={rep.total_bits / 8:.0f} bytes "
        f"({rep.total_bits / idx.n:.2f} bits/symbol)",
        file=sys.stderr,
    )
    return 0


def cmd_scan(args: argparse.Namespace) -> int:
    idx = _load(args.index)
    if isinstance(idx, int):
        return idx
    out = sys.stdout
    patterns = idx.patterns() if args.verbose else None

    def sink(occ):
        if patterns is None:
            out.write(f"{occ.start}\t{occ.end}\t{occ.pattern_id}\n")
        else:
            text = patterns[occ.pattern_id].decode("latin-1")
            out.write(f"{occ.start}\t{occ.end}\t{occ.pattern_id}\t{text}\n")

    carry = ScanState()
    chars = matches = probes = fails = reports = 0
    engine = "python"
    try:
        f = sys.stdin.buffer if args.text == "-" else open(args.text, "rb")
    except OSError as exc:
        return _fail(f"cannot read text: {exc}", 2)
    try:
        while True:
            chunk = f.read(_CHUNK)
            if not chunk:
                break
            part = scan(idx, chunk, sink, engine=args.engine, carry=carry)
            chars += part.chars
            matches += part.match_count
            probes += part.next_probes
            fails += part.fail_steps
            reports += part.report_steps
            engine = part.engine
    finally:
        if f is not sys.stdin.buffer:
            f.close()
    print(
        f"scanned {chars} bytes: {matches} occurrences, engine={engine}, "
        f"next-probes={probes} failure-steps={fails} report-steps={reports}",
        file=sys.stderr,
    )
    return 0


def cmd_stats(args: argparse.Namespace) -> int:
    idx = _load(args.index)
    if isinstance(idx, int):
        return idx
    rep = idx.space_report()
    print(f"patterns d={rep.d}  symbols n={rep.n}  states m={rep.m}  sigma={rep.sigma}")
    print(f"backend {rep.backend}")
    print(f"{'component':<14} {'payload':>10} {'aux':>10} {'total':>10}")
    for c in rep.components:
        print(f"{c.name:<14} {c.payload_bits:>10} {c.aux_bits:>10} {c.total_bits:>10}")
    print(f"{'total':<14} {rep.payload_total:>10} {rep.aux_total:>10} {rep.total_bits:>10}")
    print(f"design formula m*(log2 sigma + 3.443) + 3d*log2(n/d) = {rep.target_total_bits:.0f} bits")
    print(f"H0(transition chars) = {rep.h0_transitions:.4f} bits")
    print(f"H*(report tree degrees) = {rep.h_star_report:.4f} bits")
    if rep.bits_per_symbol_ratio is not None:
        print(f"measured/plain-text ratio = {rep.bits_per_symbol_ratio:.4f} "
              f"({rep.total_bits / rep.n:.3f} bits/symbol)")
    return 0


def cmd_retrieve(args: argparse.Namespace) -> int:
    idx = _load(args.index)
    if isinstance(idx, int):
        return idx
    if args.all:
        ids = range(idx.d)
    elif args.ids:
        ids = args.ids
    else:
        return _fail("need pattern ids or --all", 2)
    bad = [i for i in ids if not 0 <= i < idx.d]
    if bad:
        return _fail(f"pattern id {bad[0]} outside [0, {idx.d})", 2)
    for i in ids:
        sys.stdout.buffer.write(idx.retrieve_pattern(i) + b"\n")
    sys.stdout.buffer.flush()
    return 0


def _fragment_text(rng: random.Random, patterns: Sequence[bytes], size: int) -> bytes:
    alpha = sorted({b for p in patterns for b in p})
    parts = []
    total = 0
    while total < size:
        r = rng.random()
        if r < 0.5:
            p = rng.choice(patterns)
            lo = rng.randrange(len(p))
            piece = p[lo : rng.randint(lo + 1, len(p))]
        elif r < 0.9:
            piece = bytes(rng.choice(alpha) for _ in range(rng.randint(1, 8)))
        else:
            piece = bytes([rng.randrange(256)])
        parts.append(piece)
        total += len(piece)
    return b"".join(parts)


def cmd_verify(args: argparse.Namespace) -> int:
    patterns = _read_patterns(args.patterns, args.binary)
    if isinstance(patterns, int):
        return patterns
    texts: list[bytes] = []
    if args.text:
        try:
            with open(args.text, "rb") as f:
                texts.append(f.read())
        except OSError as exc:
            return _fail(f"cannot read text: {exc}", 2)
    rng = random.Random(args.seed)
    for _ in range(args.fuzz):
        texts.append(_fragment_text(rng, patterns, rng.randint(0, 800)))
    if not texts:
        return _fail("nothing to verify: give a text file or --fuzz N", 2)

    ps = PatternSet(patterns)
    backends = {
        "flat": build_index(ps, backend="flat"),
        "compressed": build_index(ps, backend="compressed"),
    }
    checked = 0
    for text in texts:
        want = naive_scan(patterns, text)
        for name, idx in backends.items():
            got = [(o.start, o.end, o.pattern_id) for o in scan(idx, text).matches]
            if got != want:
                diff = next(
                    (pair for pair in zip(got, want) if pair[0] != pair[1]),
                    (got[len(want):] or ["<missing>"], want[len(got):] or ["<extra>"]),
                )
                print(f"sdmatch: {name} backend diverges from oracle: "
                      f"got {diff[0]}, want {diff[1]}", file=sys.stderr)
                return 1
            checked += 1
    print(f"verified {checked} scans across both backends against the naive scanner",
          file=sys.stderr)
    return 0


def cmd_bench(args: argparse.Namespace) -> int:
    if args.reps < 1:
        return _fail("--reps must be at least 1", 2)
    idx = _load(args.index)
    if isinstance(idx, int):
        return idx
    try:
        with open(args.text, "rb") as f:
            text = f.read()
    except OSError as exc:
        return _fail(f"cannot read text: {exc}", 2)
    if not text:
        return _fail("benchmark text is empty", 2)

    def drop(_):
        pass

    # Warm the engine (JIT load happens outside the timed region).
    scan(idx, text[:4096], drop, engine=args.engine)

    def timed(data: bytes):
        best = None
        summary = None
        for _ in range(args.reps):
            t0 = time.perf_counter()
            summary = scan(idx, data, drop, engine=args.engine)
            dt = time.perf_counter() - t0
            best = dt if best is None else min(best, dt)
        return best, summary

    t1, s1 = timed(text)
    mbs = len(text) / t1 / 1e6
    steps = (s1.next_probes + s1.fail_steps) / s1.chars
    print(f"scanned {len(text)} bytes in {t1:.4f} s ({mbs:.1f} MB/s, "
          f"engine={s1.engine})")
    print(f"steps/char = {steps:.4f}  occurrences = {s1.match_count}")
    if args.scale:
        t2, _ = timed(text + text)
        print(f"doubled text: {t2:.4f} s, scale ratio = {t2 / t1:.3f}")
    return 0


def main(argv: Sequence[str] | None = None) -> int:
    ap = argparse.ArgumentParser(
        prog="sdmatch",
        description="Succinct multi-pattern dictionary matching.",
    )
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("build", help="index a pattern file")
    p.add_argument("patterns", help="pattern file, one byte string per line")
    p.add_argument("-o", "--output", required=True, help="index file to write")
    p.add_argument("--backend", choices=("flat", "compressed"), default="flat")
    p.add_argument("--binary", action="store_true",
                   help="patterns are length-prefixed binary records, not lines")
    p.set_defaults(func=cmd_build)

    p = sub.add_parser("scan", help="scan a text, TSV occurrences to stdout")
    p.add_argument("index")
    p.add_argument("text", nargs="?", default="-", help="text file (default stdin)")
    p.add_argument("--engine", choices=("auto", "python", "kernel"), default="auto")
    p.add_argument("--verbose", action="store_true",
                   help="append the matched pattern to each line")
    p.set_defaults(func=cmd_scan)

    p = sub.add_parser("stats", help="print the space report of an index")
    p.add_argument("index")
    p.set_defaults(func=cmd_stats)

    p = sub.add_parser("retrieve", help="reconstruct patterns from an index")
    p.add_argument("index")
    p.add_argument("ids", nargs="*", type=int, help="pattern ids")
    p.add_argument("--all", action="store_true")
    p.set_defaults(func=cmd_retrieve)

    p = sub.add_parser("verify", help="differential test against the naive scanner")
    p.add_argument("patterns")
    p.add_argument("text", nargs="?", help="optional text file")
    p.add_argument("--fuzz", type=int, default=20, help="random texts to add")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--binary", action="store_true",
                   help="patterns are length-prefixed binary records, not lines")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("bench", help="throughput measurement")
    p.add_argument("index")
    p.add_argument("text")
    p.add_argument("--reps", type=int, default=3, help="repetitions, best-of")
    p.add_argument("--scale", action="store_true",
                   help="also time the doubled text and report the ratio")
    p.add_argument("--engine", choices=("auto", "python", "kernel"), default="auto")
    p.set_defaults(func=cmd_bench)

    args = ap.parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
