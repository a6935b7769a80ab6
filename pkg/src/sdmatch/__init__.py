"""sdmatch: succinct multi-pattern dictionary matching.

Build a compressed Aho-Corasick index over a set of byte patterns, then
stream texts through it.  The index stores no pointers and no pattern
text: transitions, both suffix trees, terminal states and lengths are
all rank/select structures over bit arrays, a few percent of the size a
pointer automaton would take, while scans stay linear in the text.

    >>> import sdmatch
    >>> idx = sdmatch.build_index(sdmatch.PatternSet([b"he", b"she", b"hers"]))
    >>> sdmatch.find_all(idx, b"ushers")
    [Occurrence(start=1, end=3, pattern_id=1), Occurrence(start=2, end=3, pattern_id=0), Occurrence(start=2, end=5, pattern_id=2)]
"""

from .automaton import AlphabetMap, SpaceComponent, SpaceReport, SuccinctAcIndex
from .builder import PatternSet, build_index
from .matcher import Occurrence, ScanState, ScanSummary, find_all, scan, scan_chunked
from .oracle import naive_scan
from .storage import IndexFormatError, dump_bytes, load_bytes, load_index, save_index

__version__ = "0.1.0"

__all__ = [
    "AlphabetMap",
    "IndexFormatError",
    "Occurrence",
    "PatternSet",
    "ScanState",
    "ScanSummary",
    "SpaceComponent",
    "SpaceReport",
    "SuccinctAcIndex",
    "build_index",
    "dump_bytes",
    "find_all",
    "load_bytes",
    "load_index",
    "naive_scan",
    "save_index",
    "scan",
    "scan_chunked",
    "__version__",
]
