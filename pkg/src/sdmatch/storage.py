"""Versioned on-disk index format.

Layout, all integers little-endian:

    magic   8 bytes  "SDMX1\\0\\0\\0"
    version u32      currently 1
    flags   u32      bit 0: transition backend (0 flat, 1 compressed)
    shape   5 x u64  m, d, n, sigma, state_bits
    count   u32      number of sections
    table   count x (kind u32, byte offset u64, byte length u64)
    payload sections, each a word array, laid out back to back
    digest  8 bytes  blake2b-8 over everything before it

Every component serializes itself to a word list (its ``to_words``) and
is stored as one section; loading feeds the words back through the
matching ``from_words`` and rebuilds rank/select directories in memory,
so the file holds payload only.  Any structural problem -- bad magic,
unknown version, checksum mismatch, overlapping or truncated sections,
trailing garbage -- raises IndexFormatError.
"""

from __future__ import annotations

import hashlib
import struct
from typing import Iterator

from .automaton import AlphabetMap, FlatTransitions, SuccinctAcIndex
from .bits import EliasFanoArray, IndexableSet
from .bptree import BpTree
from .compressed import CompressedTransitions

MAGIC = b"SDMX1\x00\x00\x00"
VERSION = 1
_DIGEST_BYTES = 8

_SEC_ALPHABET = 1
_SEC_TRANSITIONS = 2
_SEC_FAILURE = 3
_SEC_REPORT = 4
_SEC_TERMINALS = 5
_SEC_LENGTHS = 6

_SECTION_ORDER = (
    _SEC_ALPHABET, _SEC_TRANSITIONS, _SEC_FAILURE,
    _SEC_REPORT, _SEC_TERMINALS, _SEC_LENGTHS,
)

_FLAG_COMPRESSED = 1


class IndexFormatError(Exception):
    """The file is not a readable index of this format version."""


def _digest(data: bytes) -> bytes:
    return hashlib.blake2b(data, digest_size=_DIGEST_BYTES).digest()


def dump_bytes(idx: SuccinctAcIndex) -> bytes:
    flags = _FLAG_COMPRESSED if idx.transitions.kind == "compressed" else 0
    sections = {
        _SEC_ALPHABET: idx.alphabet.to_words(),
        _SEC_TRANSITIONS: idx.transitions.to_words(),
        _SEC_FAILURE: idx.fail_tree.to_words(),
        _SEC_REPORT: idx.report_tree.to_words(),
        _SEC_TERMINALS: idx.terminals.to_words(),
        _SEC_LENGTHS: idx.lengths.to_words(),
    }
    head = bytearray()
    head += MAGIC
    head += struct.pack("<II", VERSION, flags)
    head += struct.pack("<5Q", idx.m, idx.d, idx.n, idx.sigma, idx.state_bits)
    head += struct.pack("<I", len(_SECTION_ORDER))

    payload_base = len(head) + 20 * len(_SECTION_ORDER)
    table = bytearray()
    body = bytearray()
    for kind in _SECTION_ORDER:
        words = sections[kind]
        blob = struct.pack(f"<{len(words)}Q", *words)
        table += struct.pack("<IQQ", kind, payload_base + len(body), len(blob))
        body += blob

    out = bytes(head) + bytes(table) + bytes(body)
    return out + _digest(out)


def load_bytes(data: bytes) -> SuccinctAcIndex:
    if len(data) < len(MAGIC) + 8 + 40 + 4 + _DIGEST_BYTES:
        raise IndexFormatError("file too short to be an index")
    if _digest(data[:-_DIGEST_BYTES]) != data[-_DIGEST_BYTES:]:
        raise IndexFormatError("checksum mismatch; file is corrupt")
    if data[: len(MAGIC)] != MAGIC:
        raise IndexFormatError("bad magic; not an index file")
    off = len(MAGIC)
    version, flags = struct.unpack_from("<II", data, off)
    off += 8
    if version != VERSION:
        raise IndexFormatError(f"unsupported format version {version}")
    if flags & ~_FLAG_COMPRESSED:
        raise IndexFormatError(f"unknown flags 0x{flags:x}")
    m, d, n, sigma, state_bits = struct.unpack_from("<5Q", data, off)
    off += 40
    (count,) = struct.unpack_from("<I", data, off)
    off += 4
    if count != len(_SECTION_ORDER):
        raise IndexFormatError(f"expected {len(_SECTION_ORDER)} sections, found {count}")

    end_of_payload = len(data) - _DIGEST_BYTES
    expected = off + 20 * count
    words_by_kind: dict[int, Iterator[int]] = {}
    for _ in range(count):
        kind, sec_off, sec_len = struct.unpack_from("<IQQ", data, off)
        off += 20
        if sec_off != expected or sec_len % 8:
            raise IndexFormatError("section table is inconsistent")
        expected = sec_off + sec_len
        if expected > end_of_payload:
            raise IndexFormatError("section extends past end of file")
        if kind in words_by_kind or kind not in _SECTION_ORDER:
            raise IndexFormatError(f"unexpected section kind {kind}")
        words = struct.unpack_from(f"<{sec_len // 8}Q", data, sec_off)
        words_by_kind[kind] = iter(words)
    if expected != end_of_payload:
        raise IndexFormatError("trailing bytes after last section")

    try:
        alphabet = AlphabetMap.from_words(words_by_kind[_SEC_ALPHABET])
        if flags & _FLAG_COMPRESSED:
            transitions = CompressedTransitions.from_words(words_by_kind[_SEC_TRANSITIONS])
        else:
            transitions = FlatTransitions.from_words(words_by_kind[_SEC_TRANSITIONS])
        fail_tree = BpTree.from_words(words_by_kind[_SEC_FAILURE])
        report_tree = BpTree.from_words(words_by_kind[_SEC_REPORT])
        terminals = IndexableSet.from_words(words_by_kind[_SEC_TERMINALS])
        lengths = EliasFanoArray.from_words(words_by_kind[_SEC_LENGTHS])
        return SuccinctAcIndex(
            alphabet, m, n, d, state_bits,
            transitions, fail_tree, report_tree, terminals, lengths,
        )
    except (StopIteration, ValueError, OverflowError) as exc:
        raise IndexFormatError(f"index payload is inconsistent: {exc}") from exc


def save_index(idx: SuccinctAcIndex, path: str) -> None:
    blob = dump_bytes(idx)
    with open(path, "wb") as f:
        f.write(blob)


def load_index(path: str) -> SuccinctAcIndex:
    with open(path, "rb") as f:
        return load_bytes(f.read())
