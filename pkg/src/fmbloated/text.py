"""Text loading, suffix sorting and the brute-force counting oracle.

Positions and ranks exposed by this module are 1-based, matching the way
the backward search is usually written: the payload is ``T[1..n]`` and the
sentinel sits at ``n + 1``.  The arrays themselves are ordinary 0-indexed
numpy arrays holding those 1-based values, so ``sa[r - 1]`` is the start of
the suffix with rank ``r``.
"""
from __future__ import annotations

import os
from dataclasses import dataclass, field
from functools import cached_property
from pathlib import Path
from typing import Optional, Tuple, Union

import numpy as np

SENTINEL = 0
# q-gram lengths are stored in 8 bits, so no code path ever needs an LCP
# value above this.
LCP_CAP = 255


class InvalidInputError(ValueError):
    """Raised for empty texts/patterns or payloads containing the sentinel."""


@dataclass(frozen=True)
class Text:
    """An indexed byte sequence.  The sentinel is implicit in :attr:`array`."""

    payload: bytes
    n: int = field(init=False)

    def __post_init__(self):
        if not self.payload:
            raise InvalidInputError("text is empty")
        if b"\x00" in self.payload:
            raise InvalidInputError("text contains the sentinel byte 0x00")
        object.__setattr__(self, "n", len(self.payload))

    @cached_property
    def array(self) -> np.ndarray:
        """uint8 array of length n + 1, sentinel last."""
        arr = np.empty(self.n + 1, dtype=np.uint8)
        arr[: self.n] = np.frombuffer(self.payload, dtype=np.uint8)
        arr[self.n] = SENTINEL
        return arr

    def __len__(self):
        return self.n

    def __repr__(self):
        head = self.payload[:20]
        more = "..." if self.n > 20 else ""
        return f"Text(n={self.n}, {head!r}{more})"


def load_text(source: Union[str, bytes, bytearray, os.PathLike]) -> Text:
    """Build a :class:`Text` from raw bytes or from a file path.

    ``str`` arguments are treated as paths; pass ``bytes`` for literal text.
    """
    if isinstance(source, (bytes, bytearray, memoryview)):
        data = bytes(source)
    else:
        data = Path(source).read_bytes()
    return Text(data)


def as_pattern(p: Union[bytes, bytearray, str]) -> bytes:
    """Validate a pattern and return it as ``bytes`` (str is UTF-8 encoded)."""
    if isinstance(p, str):
        p = p.encode("utf-8")
    p = bytes(p)
    if not p:
        raise InvalidInputError("pattern is empty")
    if b"\x00" in p:
        raise InvalidInputError("pattern contains the sentinel byte 0x00")
    return p


@dataclass(frozen=True, eq=False)
class SuffixArray:
    """Sorted suffix order of the sentinel-terminated text.

    ``sa[r - 1]`` is the (1-based) start of the rank-``r`` suffix and
    ``rank[i - 1]`` the rank of the suffix starting at ``i``.  ``levels``
    holds the prefix-doubling rank arrays for prefix lengths 1, 2, 4, ...,
    128 (0-based positions); they are what makes :func:`capped_lcp` cheap.
    """

    sa: np.ndarray
    rank: np.ndarray
    levels: Tuple[np.ndarray, ...] = field(repr=False, default=())

    def __len__(self):
        return len(self.sa)

    def without_levels(self) -> "SuffixArray":
        return SuffixArray(self.sa, self.rank)


def build_suffix_array(t: Text) -> SuffixArray:
    """Sort all suffixes of ``t`` by prefix doubling."""
    s = t.array
    size = len(s)
    rank = s.astype(np.int64)
    levels = [s.astype(np.int32)]
    width = 1
    # Initial ranks are byte values, later ones are dense in 0..size-1.
    mult = max(size, 256) + 1
    while True:
        # Ranks start at 0 only for the sentinel, so shifting by one keeps
        # "past the end" (0) strictly smallest.
        second = np.zeros(size, dtype=np.int64)
        second[: size - width] = rank[width:] + 1
        key = rank * mult + second
        order = np.argsort(key, kind="stable")
        sorted_key = key[order]
        fresh = np.empty(size, dtype=bool)
        fresh[0] = True
        np.not_equal(sorted_key[1:], sorted_key[:-1], out=fresh[1:])
        rank = np.empty(size, dtype=np.int64)
        rank[order] = np.cumsum(fresh) - 1
        width *= 2
        if len(levels) < 8:
            levels.append(rank.astype(np.int32))
        if rank[order[-1]] == size - 1:
            break
    while len(levels) < 8:
        levels.append(levels[-1])
    del rank, key, sorted_key, second, fresh
    dtype = index_dtype(size + 1)
    sa = (order + 1).astype(dtype)
    inv = np.empty(size, dtype=dtype)
    inv[order] = np.arange(1, size + 1, dtype=dtype)
    return SuffixArray(sa, inv, tuple(levels))


def index_dtype(limit: int):
    """Smallest signed integer dtype holding values up to ``limit``."""
    return np.int32 if limit < 2**31 else np.int64


def capped_lcp(sa: SuffixArray, cap: int = LCP_CAP) -> np.ndarray:
    """LCP of each pair of SA neighbours, clipped at ``cap`` (max 255).

    ``out[r]`` is the common prefix length of the suffixes of rank ``r`` and
    ``r + 1`` (1-based), i.e. of ``sa[r - 1]`` and ``sa[r]``.
    """
    if not 0 <= cap <= LCP_CAP:
        raise ValueError("cap must be in 0..255")
    if not sa.levels:
        raise ValueError("suffix array carries no doubling levels")
    a = sa.sa[:-1].astype(np.int64) - 1
    b = sa.sa[1:].astype(np.int64) - 1
    lcp = np.zeros(len(a), dtype=np.int64)
    for k in range(7, -1, -1):
        step = 1 << k
        lv = sa.levels[k]
        same = lv[a + lcp] == lv[b + lcp]
        lcp += same * step
    np.minimum(lcp, cap, out=lcp)
    return lcp.astype(np.int16)


def sa_range_of(t: Text, sa: SuffixArray, s: bytes) -> Optional[Tuple[int, int]]:
    """Rank interval ``(lo, hi)`` of suffixes prefixed by ``s``, or None."""
    s = as_pattern(s)
    data = t.payload
    m = len(s)
    starts = sa.sa

    def prefix(r):
        i = int(starts[r]) - 1
        return data[i : i + m]

    lo, hi = 0, len(starts)
    while lo < hi:
        mid = (lo + hi) // 2
        if prefix(mid) < s:
            lo = mid + 1
        else:
            hi = mid
    first = lo
    hi = len(starts)
    while lo < hi:
        mid = (lo + hi) // 2
        if prefix(mid) <= s:
            lo = mid + 1
        else:
            hi = mid
    if lo == first:
        return None
    return first + 1, lo


def naive_count(t: Union[Text, bytes], p: Union[bytes, str]) -> int:
    """Count (overlapping) occurrences of ``p`` by direct sliding comparison."""
    data = t.payload if isinstance(t, Text) else bytes(t)
    p = as_pattern(p)
    m = len(p)
    return sum(1 for i in range(len(data) - m + 1) if data[i : i + m] == p)
