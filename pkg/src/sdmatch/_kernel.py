"""Optional compiled scan engine (numba) for flat-backend indexes.

This is a mechanical translation of the pure-Python scan loop and of the
succinct queries it performs -- rank/select over packed words, bucket
search in the Elias-Fano low halves, backward excess search for tree
parents -- operating on numpy views of the very same word arrays.  It
exists purely for throughput on long texts; semantics and counters match
the reference loop bit for bit, which the test suite checks by running
both engines over the same inputs.

The views add two kinds of derived acceleration data that the portable
structure does not carry: universal byte tables (select within a byte,
excess shift of a byte) and a per-tree segment tree over block excess
minima that turns the backward block walk into a logarithmic descent.
Both are rebuilt from the succinct payloads at load time and change no
query result.

Everything degrades gracefully: without numba, ``available()`` is False
and the matcher stays on the reference loop.
"""

from __future__ import annotations

from typing import TYPE_CHECKING

import numpy as np

if TYPE_CHECKING:
    from .automaton import SuccinctAcIndex
    from .bptree import BpTree
    from .matcher import ScanState

try:
    from numba import int64, njit, uint64

    _HAVE_NUMBA = True
except Exception:  # pragma: no cover - exercised only without numba
    _HAVE_NUMBA = False


_SEG_INF = 1 << 62


def available() -> bool:
    return _HAVE_NUMBA


def _byte_tables() -> tuple[np.ndarray, np.ndarray]:
    """Per-byte popcount and select: position of the r-th set bit."""
    pc = np.zeros(256, np.int64)
    sel = np.zeros((256, 8), np.int64)
    for v in range(256):
        r = 0
        for b in range(8):
            if (v >> b) & 1:
                sel[v, r] = b
                r += 1
        pc[v] = r
    return pc, sel


def _excess_tables() -> tuple[np.ndarray, np.ndarray]:
    """Byte-granular helpers for the backward excess search.

    Scanning a parenthesis byte right to left, step k consumes bit
    (8 - k) and shifts the running excess by sum(2*bit - 1).  BK_K[v][d+8]
    is the smallest k in 1..7 at which that shift equals d (8 if never);
    BK_D[v] is the full-byte shift.  One table probe replaces up to seven
    bit steps; hits on the byte boundary fall out of the loop head.
    """
    bk_k = np.full((256, 17), 8, np.int64)
    bk_d = np.empty(256, np.int64)
    for v in range(256):
        off = 0
        for k in range(1, 9):
            off += 2 * ((v >> (8 - k)) & 1) - 1
            if k < 8 and bk_k[v, off + 8] == 8:
                bk_k[v, off + 8] = k
        bk_d[v] = off
    return bk_k, bk_d


def _chunk_tables() -> tuple[np.ndarray, np.ndarray]:
    """Top-down excess envelope of every 16-bit parenthesis chunk.

    Reading a chunk's bits from the top, the running excess shift visits
    every integer between its extremes, so a backward search can skip the
    whole chunk iff its maximum shift stays short of the wanted drop.
    MX16 is that maximum, D16 the full-chunk shift.
    """
    arr = np.arange(65536, dtype=np.int64)
    bits = (arr[:, None] >> (15 - np.arange(16))) & 1
    cum = np.cumsum(2 * bits - 1, axis=1)
    return cum.max(axis=1).astype(np.int8), cum[:, 15].astype(np.int8)


_PC8, _SEL8 = _byte_tables()
_BK_K, _BK_D = _excess_tables()
_MX16, _D16 = _chunk_tables()


def _bp_bits_pexc(tree: "BpTree") -> tuple[np.ndarray, np.ndarray]:
    words = np.array(tree.bv.words, dtype=np.uint64)
    bits = np.unpackbits(words.view(np.uint8), bitorder="little")[: tree.bv.length]
    return bits, np.cumsum(2 * bits.astype(np.int64) - 1)


def _bp_seg(tree: "BpTree") -> np.ndarray:
    """Segment tree over per-block minima of the prefix excess.

    Leaf b holds min over positions j in block b of excess_before(j+1);
    pad leaves hold +inf.  The backward search answer "rightmost block
    <= R whose minimum reaches the target" becomes one root-ward walk
    plus one descent.
    """
    length = tree.bv.length
    _, pexc = _bp_bits_pexc(tree)
    nblocks = (length + 511) >> 9
    pad = (nblocks << 9) - length
    if pad:
        pexc = np.concatenate([pexc, np.full(pad, _SEG_INF, np.int64)])
    absmin = pexc.reshape(nblocks, 512).min(axis=1)
    size = 1
    while size < nblocks:
        size <<= 1
    seg = np.full(2 * size, _SEG_INF, np.int64)
    seg[size:size + nblocks] = absmin
    for node in range(size - 1, 0, -1):
        seg[node] = min(seg[2 * node], seg[2 * node + 1])
    return seg


def _pack_flags(flags: np.ndarray) -> np.ndarray:
    """Bool array -> uint64 words, bit i of word i>>6 at position i&63."""
    packed = np.packbits(flags, bitorder="little")
    pad = (-packed.shape[0]) % 8
    if pad:
        packed = np.concatenate([packed, np.zeros(pad, np.uint8)])
    return packed.view(np.uint64).copy()


def _root_child_flags(tree: "BpTree") -> np.ndarray:
    """One bit per node: parent is the root.

    A node's open parenthesis sits at depth one exactly when the prefix
    excess including it is two.  Nearly every report-tree hop lands here,
    so the flag answers the common parent query with a single load.
    """
    bits, pexc = _bp_bits_pexc(tree)
    flags = pexc[np.flatnonzero(bits)] == 2
    return _pack_flags(flags)


if _HAVE_NUMBA:
    _M1 = uint64(0x5555555555555555)
    _M2 = uint64(0x3333333333333333)
    _M4 = uint64(0x0F0F0F0F0F0F0F0F)
    _H01 = uint64(0x0101010101010101)
    _U0 = uint64(0)
    _U1 = uint64(1)

    @njit(cache=True, inline="always")
    def _popcount(x):
        x = x - ((x >> _U1) & _M1)
        x = (x & _M2) + ((x >> uint64(2)) & _M2)
        x = (x + (x >> uint64(4))) & _M4
        return int64((x * _H01) >> uint64(56))

    @njit(cache=True, inline="always")
    def _word_select(w, r):
        # Position of the r-th (0-based) set bit; callers guarantee it exists.
        base = 0
        while True:
            v = w & uint64(0xFF)
            c = _PC8[v]
            if r < c:
                return base + _SEL8[v, r]
            r -= c
            w >>= uint64(8)
            base += 8

    @njit(cache=True)
    def _bv_rank1(words, sup, blk, i):
        r = sup[i >> 12] + blk[i >> 9]
        w = i >> 6
        for k in range((i >> 9) << 3, w):
            r += _popcount(words[k])
        rem = i & 63
        if rem:
            r += _popcount(words[w] & ((_U1 << uint64(rem)) - _U1))
        return r

    @njit(cache=True)
    def _bv_select1(words, sup, blk, samples, k):
        # Sample pins the starting block; the rank directory walks whole
        # blocks, so at most eight words are ever popcounted.
        pos = samples[k >> 10]
        if k == (k >> 10) << 10:
            return pos
        b = pos >> 9
        nb = blk.shape[0]
        while b + 1 < nb:
            nxt = (b + 1) << 9
            if sup[nxt >> 12] + blk[b + 1] > k:
                break
            b += 1
        start = b << 9
        r = k - (sup[start >> 12] + blk[b])
        w = start >> 6
        while True:
            c = _popcount(words[w])
            if r < c:
                return (w << 6) + _word_select(words[w], r)
            r -= c
            w += 1

    @njit(cache=True)
    def _bv_select0(words, sup, blk, samples, k):
        pos = samples[k >> 10]
        if k == (k >> 10) << 10:
            return pos
        b = pos >> 9
        nb = blk.shape[0]
        while b + 1 < nb:
            nxt = (b + 1) << 9
            if nxt - (sup[nxt >> 12] + blk[b + 1]) > k:
                break
            b += 1
        start = b << 9
        r = k - (start - (sup[start >> 12] + blk[b]))
        w = start >> 6
        while True:
            c = _popcount(~words[w])
            if r < c:
                return (w << 6) + _word_select(~words[w], r)
            r -= c
            w += 1

    @njit(cache=True, inline="always")
    def _ef_low(low_words, lw, i):
        if lw == 0:
            return int64(0)
        off = i * lw
        sh = off & 63
        v = low_words[off >> 6] >> uint64(sh)
        if sh + lw > 64:
            v |= low_words[(off >> 6) + 1] << uint64(64 - sh)
        return int64(v & ((_U1 << uint64(lw)) - _U1))

    @njit(cache=True)
    def _iset_rank(low_words, lw, high_words, h_sup, h_blk, sel0, zeros, size, key):
        # -1 when absent.  One select0 pins the bucket's left edge; the
        # right edge is the next zero, found by a short forward scan.
        h = key >> lw
        if h >= zeros:
            end = size
            if h == 0:
                start = 0
            elif h - 1 >= zeros:
                start = size
            else:
                start = _bv_select0(high_words, h_sup, h_blk, sel0, h - 1) - (h - 1)
        elif h == 0:
            start = 0
            end = _bv_select0(high_words, h_sup, h_blk, sel0, 0)
        else:
            q0 = _bv_select0(high_words, h_sup, h_blk, sel0, h - 1)
            start = q0 - (h - 1)
            w = q0 >> 6
            cur = ((~high_words[w]) >> uint64(q0 & 63)) >> _U1
            base = q0 + 1
            while cur == _U0:
                w += 1
                cur = ~high_words[w]
                base = w << 6
            low1 = cur & (~cur + _U1)
            end = base + _popcount(low1 - _U1) - h
        lo = key - (h << lw)
        while start < end:
            mid = (start + end) >> 1
            got = _ef_low(low_words, lw, mid)
            if got == lo:
                return mid
            if got < lo:
                start = mid + 1
            else:
                end = mid
        return int64(-1)

    @njit(cache=True, inline="always")
    def _ef_prefix(low_words, lw, high_words, h_sup, h_blk, sel1, i):
        hp = _bv_select1(high_words, h_sup, h_blk, sel1, i) - i
        return (hp << lw) + _ef_low(low_words, lw, i)

    @njit(cache=True)
    def _bp_scan_backward(words, hi, lo, exc_hi, target):
        # Rightmost j in [lo, hi] whose inclusive excess equals target.
        # Bit steps up to a 16-bit boundary, then whole-chunk skips via
        # the excess envelope, with byte tables resolving the hit chunk;
        # lo is always block aligned, so chunks never straddle it.  The
        # running excess stays above target between checks, which is what
        # makes the envelope test exact.
        j = hi
        cur = exc_hi
        while j >= lo and (j & 15) != 15:
            if cur == target:
                return j
            if (words[j >> 6] >> uint64(j & 63)) & _U1:
                cur -= 1
            else:
                cur += 1
            j -= 1
        while j >= lo:
            if cur == target:
                return j
            c = (words[j >> 6] >> uint64((j & 63) - 15)) & uint64(0xFFFF)
            if cur - _MX16[c] <= target:
                v = c >> uint64(8)
                d = cur - target
                if -8 <= d <= 8:
                    k = _BK_K[v, d + 8]
                    if k < 8:
                        return j - k
                cur -= _BK_D[v]
                if cur == target:
                    return j - 8
                v = c & uint64(0xFF)
                d = cur - target
                if -8 <= d <= 8:
                    k = _BK_K[v, d + 8]
                    if k < 8:
                        return j - 8 - k
                cur -= _BK_D[v]
                j -= 16
            else:
                cur -= _D16[c]
                j -= 16
        return int64(-1)

    @njit(cache=True)
    def _seg_rightmost_le(seg, right, target):
        # Rightmost leaf <= right whose value reaches target, or -1.
        size = seg.shape[0] >> 1
        node = size + right
        if seg[node] <= target:
            return right
        while node > 1:
            if (node & 1) and seg[node - 1] <= target:
                node -= 1
                while node < size:
                    node = 2 * node + 1 if seg[2 * node + 1] <= target else 2 * node
                return node - size
            node >>= 1
        return int64(-1)

    @njit(cache=True)
    def _bp_parent(words, sup, blk, sel1, seg, rc, i):
        if (rc[i >> 6] >> uint64(i & 63)) & _U1:
            return int64(0)
        p = _bv_select1(words, sup, blk, sel1, i)
        # i set bits precede position p, so excess_before(p) is 2i - p.
        eb = 2 * i - p
        target = eb - 1
        if target == 0:
            return int64(0)
        blkno = p >> 9
        j = int64(-1)
        if seg[(seg.shape[0] >> 1) + blkno] <= target:
            j = _bp_scan_backward(words, p - 1, blkno << 9, eb, target)
        if j < 0 and blkno > 0:
            b = _seg_rightmost_le(seg, blkno - 1, target)
            if b >= 0:
                hi = (b << 9) + 511
                exc_hi = 2 * _bv_rank1(words, sup, blk, hi + 1) - (hi + 1)
                j = _bp_scan_backward(words, hi, b << 9, exc_hi, target)
        return _bv_rank1(words, sup, blk, j + 1)

    @njit(cache=True)
    def _scan_flat(
        text, state, step,
        amap, state_bits,
        p_low, p_lw, p_high, p_sup, p_blk, p_sel0, p_zeros, p_size,
        t_low, t_lw, t_high, t_sup, t_blk, t_sel0, t_zeros, t_size, t_flag,
        l_low, l_lw, l_high, l_sup, l_blk, l_sel1,
        f_words, f_sup, f_blk, f_sel1, f_seg, f_rc,
        r_words, r_sup, r_blk, r_sel1, r_seg, r_rc,
    ):
        cap = 1024
        o_start = np.empty(cap, np.int64)
        o_end = np.empty(cap, np.int64)
        o_id = np.empty(cap, np.int64)
        cnt = 0
        fail_steps = int64(0)
        report_steps = int64(0)
        queries = int64(0)

        for ti in range(text.shape[0]):
            step += 1
            code = amap[text[ti]]
            if code < 0:
                state = 0
                continue
            key_base = code << state_bits
            while True:
                queries += 1
                r = _iset_rank(
                    p_low, p_lw, p_high, p_sup, p_blk, p_sel0, p_zeros, p_size,
                    key_base | state,
                )
                if r >= 0:
                    state = r + 1
                    break
                if state == 0:
                    break
                state = _bp_parent(f_words, f_sup, f_blk, f_sel1, f_seg, f_rc, state)
                fail_steps += 1
            if state == 0:
                continue
            tmp = state
            if (t_flag[tmp >> 6] >> uint64(tmp & 63)) & _U1:
                tid = _iset_rank(
                    t_low, t_lw, t_high, t_sup, t_blk, t_sel0, t_zeros, t_size, tmp
                )
            else:
                tid = int64(-1)
            while True:
                if tid >= 0:
                    length = _ef_prefix(l_low, l_lw, l_high, l_sup, l_blk, l_sel1, tid)
                    if tid > 0:
                        length -= _ef_prefix(
                            l_low, l_lw, l_high, l_sup, l_blk, l_sel1, tid - 1
                        )
                    if cnt == cap:
                        cap <<= 1
                        ns = np.empty(cap, np.int64); ns[:cnt] = o_start; o_start = ns
                        ne = np.empty(cap, np.int64); ne[:cnt] = o_end; o_end = ne
                        ni = np.empty(cap, np.int64); ni[:cnt] = o_id; o_id = ni
                    o_start[cnt] = step - length
                    o_end[cnt] = step - 1
                    o_id[cnt] = tid
                    cnt += 1
                tmp = _bp_parent(r_words, r_sup, r_blk, r_sel1, r_seg, r_rc, tmp)
                report_steps += 1
                if tmp == 0:
                    break
                # Non-root report-chain states are terminal by construction.
                tid = _iset_rank(
                    t_low, t_lw, t_high, t_sup, t_blk, t_sel0, t_zeros, t_size, tmp
                )

        return (
            o_start[:cnt], o_end[:cnt], o_id[:cnt],
            state, step, fail_steps, report_steps, queries,
        )


def _u64(words: list[int]) -> np.ndarray:
    return np.array(words, dtype=np.uint64)


def _i64(values: list[int]) -> np.ndarray:
    return np.array(values, dtype=np.int64)


def _terminal_flags(idx: "SuccinctAcIndex") -> np.ndarray:
    """One bit per state: the state completes some pattern."""
    flags = np.zeros(idx.m, bool)
    term = idx.terminals
    for t in range(term.size):
        flags[term.select(t)] = True
    return _pack_flags(flags)


def _views(idx: "SuccinctAcIndex") -> tuple:
    """Numpy views of the index payloads, in _scan_flat argument order."""
    pairs = idx.transitions.pairs
    term = idx.terminals
    lengths = idx.lengths
    ft, rt = idx.fail_tree, idx.report_tree
    ph = pairs.ef.high
    th = term.ef.high if term.ef else None
    lh = lengths.high
    return (
        _i64(idx.alphabet.code_of_byte), idx.state_bits,
        _u64(pairs.ef.low_words), pairs.ef.low_width,
        _u64(ph.words), _i64(ph._sup), _i64(ph._blk), _i64(ph._sel0),
        ph.zeros, pairs.size,
        _u64(term.ef.low_words) if term.ef else _u64([]),
        term.ef.low_width if term.ef else 0,
        _u64(th.words) if th else _u64([]),
        _i64(th._sup) if th else _i64([0]),
        _i64(th._blk) if th else _i64([0]),
        _i64(th._sel0) if th else _i64([]),
        th.zeros if th else 0,
        term.size,
        _terminal_flags(idx),
        _u64(lengths.low_words), lengths.low_width,
        _u64(lh.words), _i64(lh._sup), _i64(lh._blk), _i64(lh._sel1),
        _u64(ft.bv.words), _i64(ft.bv._sup), _i64(ft.bv._blk), _i64(ft.bv._sel1),
        _bp_seg(ft), _root_child_flags(ft),
        _u64(rt.bv.words), _i64(rt.bv._sup), _i64(rt.bv._blk), _i64(rt.bv._sel1),
        _bp_seg(rt), _root_child_flags(rt),
    )


def views(idx: "SuccinctAcIndex") -> tuple:
    if idx._kernel_cache is None:
        idx._kernel_cache = _views(idx)
    return idx._kernel_cache


def scan_into(idx: "SuccinctAcIndex", data: bytes, carry: "ScanState", emit) -> tuple[int, int, int, int]:
    """Run the compiled scan and replay its occurrences through emit."""
    if not _HAVE_NUMBA:
        raise RuntimeError("numba is not available")
    text = np.frombuffer(data, dtype=np.uint8)
    v = views(idx)
    o_start, o_end, o_id, state, step, fails, reports, queries = _scan_flat(
        text, carry.state, carry.step, *v
    )
    from .matcher import Occurrence

    for s, e, i in zip(o_start.tolist(), o_end.tolist(), o_id.tolist()):
        emit(Occurrence(s, e, i))
    carry.state = int(state)
    carry.step = int(step)
    return len(data), int(fails), int(reports), int(queries)
