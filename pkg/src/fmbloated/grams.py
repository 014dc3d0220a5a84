"""Vectorised enumeration of q-gram classes from the suffix array.

All occurrences of one l-gram ``x`` are the suffixes of a single SA interval
whose neighbouring LCPs are >= l.  Walking that interval in SA order and
reading the rank of the suffix that follows each occurrence gives ``L_x``
already sorted, and the interval's first rank minus one is ``C[x]``.  This
turns index construction into a handful of array passes per length.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, List, Optional

import numpy as np

from .store import QGramStore, StoreConfig, TextHasher
from .text import LCP_CAP, SuffixArray, Text, capped_lcp, index_dtype


@dataclass
class GramLevel:
    """Class structure of all l-grams for one length l, in SA order."""

    length: int
    rows: np.ndarray  # 0-based SA rows whose suffix holds >= l payload symbols
    is_start: np.ndarray  # per row: first row of its class
    group: np.ndarray  # per row: class id


class GramClasses:
    """Shared SA/LCP state for enumerating q-gram classes of one text."""

    def __init__(self, t: Text, sa: SuffixArray):
        self.text = t
        self.sa = sa
        self.lcp = capped_lcp(sa, LCP_CAP)
        self.starts0 = sa.sa - 1
        self._avail = t.n - self.starts0
        self._group_dtype = index_dtype(len(sa))

    def level(self, length: int) -> GramLevel:
        if not 1 <= length <= LCP_CAP:
            raise ValueError("q-gram length outside 1..255")
        rows = np.nonzero(self._avail >= length)[0]
        boundary = np.empty(len(self.starts0), dtype=bool)
        boundary[0] = True
        np.less(self.lcp, length, out=boundary[1:])
        is_start = boundary[rows]
        group = np.cumsum(is_start, dtype=self._group_dtype)
        group -= 1
        return GramLevel(length, rows, is_start, group)

    def group_of_positions(self, lvl: GramLevel, positions0: np.ndarray) -> np.ndarray:
        """Class ids of the l-grams starting at the given 0-based positions."""
        lookup = np.full(len(self.starts0), -1, dtype=np.int64)
        lookup[lvl.rows] = lvl.group
        return lookup[self.sa.rank[positions0] - 1]


@dataclass
class KeyBatch:
    key_pos: np.ndarray
    key_len: np.ndarray
    count_base: np.ndarray
    list_lens: np.ndarray
    pool: np.ndarray

    def __len__(self):
        return len(self.key_pos)


def collect(classes: GramClasses, lvl: GramLevel, selected: Optional[np.ndarray] = None) -> KeyBatch:
    """Keys and occurrence lists for the classes of ``lvl`` (all, or ``selected``)."""
    rows, is_start = lvl.rows, lvl.is_start
    if selected is not None:
        keep = selected[lvl.group]
        rows, is_start = rows[keep], is_start[keep]
    first = np.nonzero(is_start)[0]
    start_rows = rows[first]
    list_lens = np.diff(first, append=len(rows))
    follow = classes.starts0[rows]
    follow += lvl.length
    pool = classes.sa.rank[follow].astype(np.uint32)
    del follow
    return KeyBatch(
        key_pos=classes.sa.sa[start_rows].astype(np.uint32),
        key_len=np.full(len(start_rows), lvl.length, dtype=np.uint8),
        count_base=start_rows.astype(np.uint32),
        list_lens=list_lens.astype(np.int64),
        pool=pool,
    )


def merge_store(t: Text, batches: Iterable[KeyBatch], config: Optional[StoreConfig] = None) -> QGramStore:
    batches: List[KeyBatch] = list(batches)

    def cat(name, dtype):
        # Frees each field of the batches as soon as it is merged.
        parts = [getattr(b, name) for b in batches]
        for b in batches:
            setattr(b, name, None)
        out = np.concatenate(parts).astype(dtype, copy=False) if parts else np.zeros(0, dtype)
        del parts
        return out

    key_pos = cat("key_pos", np.uint32)
    key_len = cat("key_len", np.uint8)
    count_base = cat("count_base", np.uint32)
    list_lens = cat("list_lens", np.int64)
    pool = cat("pool", np.uint32)
    del batches
    return QGramStore.from_arrays(
        t, key_pos, key_len, count_base, list_lens, pool, config, hasher=TextHasher(t.array)
    )
