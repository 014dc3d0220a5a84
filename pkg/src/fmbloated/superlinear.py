"""Superlinear-space index over q-grams of power-of-two or Fibonacci lengths.

For every text position ``i`` and every scheme length ``l <= min(i, max_len)``
the q-gram ending at ``i`` is stored, with the rank of suffix ``i + 1`` in
its occurrence list.  A pattern is cut greedily from the right into chunks
of scheme lengths, so a pow2 search takes popcount(m) steps.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property, lru_cache
from typing import List, Optional, Tuple, Union

from .grams import GramClasses, collect, merge_store
from .search import CountResult, backward_count
from .store import QGramStore, StoreConfig, check_text_size
from .text import SuffixArray, Text, as_pattern, build_suffix_array

POW2 = "pow2"
FIBONACCI = "fibonacci"

_POW2_LENGTHS = (1, 2, 4, 8, 16, 32, 64, 128)
_FIB_LENGTHS = (1, 2, 3, 5, 8, 13, 21, 34, 55, 89, 144, 233)
DEFAULT_MAX_LEN = {POW2: 128, FIBONACCI: 89}


@dataclass(frozen=True)
class Scheme:
    kind: str = POW2
    max_len: Optional[int] = None

    def __post_init__(self):
        kind = {"fib": FIBONACCI}.get(self.kind, self.kind)
        if kind not in (POW2, FIBONACCI):
            raise ValueError(f"unknown scheme {self.kind!r}")
        object.__setattr__(self, "kind", kind)
        if self.max_len is None:
            object.__setattr__(self, "max_len", DEFAULT_MAX_LEN[kind])
        if self.max_len not in self.all_lengths:
            raise ValueError(
                f"max_len {self.max_len} is not one of the {kind} lengths {self.all_lengths}"
            )

    @property
    def all_lengths(self) -> Tuple[int, ...]:
        return _POW2_LENGTHS if self.kind == POW2 else _FIB_LENGTHS

    @property
    def lengths(self) -> Tuple[int, ...]:
        return tuple(x for x in self.all_lengths if x <= self.max_len)


def scheme_lengths(i: int, scheme: Scheme) -> List[int]:
    """Lengths of the q-grams stored for the suffix following position ``i``."""
    return [x for x in scheme.lengths if x <= i]


@dataclass(frozen=True)
class Decomposition:
    """Pattern chunks as (1-based start, length), in processing order."""

    chunks: Tuple[Tuple[int, int], ...]

    @property
    def lengths(self) -> List[int]:
        return [size for _, size in self.chunks]

    def __len__(self):
        return len(self.chunks)


@lru_cache(maxsize=4096)
def decompose_pattern(m: int, scheme: Scheme) -> Decomposition:
    if m < 1:
        raise ValueError("pattern length must be >= 1")
    lengths = scheme.lengths
    chunks = []
    i = m
    while i >= 1:
        size = max(x for x in lengths if x <= i)
        chunks.append((i - size + 1, size))
        i -= size
    return Decomposition(tuple(chunks))


class SuperlinearIndex:
    def __init__(self, text: Text, store: QGramStore, scheme: Scheme, sa: Optional[SuffixArray] = None):
        self.text = text
        self.store = store
        self.scheme = scheme
        if sa is not None:
            self.__dict__["sa"] = sa

    variant = 1

    @cached_property
    def sa(self) -> SuffixArray:
        return build_suffix_array(self.text)

    def count(self, pattern: Union[bytes, str], trace=None) -> CountResult:
        return count_superlinear(self, pattern, trace)

    def __repr__(self):
        return f"SuperlinearIndex(n={self.text.n}, scheme={self.scheme}, {self.store!r})"


def build_superlinear(
    t: Text, scheme: Optional[Scheme] = None, config: Optional[StoreConfig] = None
) -> SuperlinearIndex:
    scheme = scheme or Scheme()
    check_text_size(t.n)
    sa = build_suffix_array(t)
    classes = GramClasses(t, sa)
    batches = [collect(classes, classes.level(x)) for x in scheme.lengths if x <= t.n]
    del classes
    store = merge_store(t, batches, config)
    return SuperlinearIndex(t, store, scheme, sa.without_levels())


def count_superlinear(idx: SuperlinearIndex, p: Union[bytes, str], trace=None) -> CountResult:
    p = as_pattern(p)
    n = idx.text.n
    if len(p) > n:
        return CountResult(0, 0, 1, 0)
    chunks = decompose_pattern(len(p), idx.scheme).chunks
    return backward_count(idx.store, p, chunks, n, trace)
