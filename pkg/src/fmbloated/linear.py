"""Linear-space index over minimizer-delimited q-grams.

A window of length ``q`` slides over the text; in each window the leftmost
lexicographically smallest ``p``-gram is the window's minimizer.  Minimizer
start positions cut the text into gap q-grams ``T[i_j .. i_{j+1} - 1]``.
The store holds every unigram plus every gap q-gram longer than one symbol,
each with the list of **all** its occurrences, so the same LF-mapping as in
the superlinear variant applies.  A pattern is cut the same way: unigram
steps over its tail, then its own gap q-grams, then unigram steps over its
head.  Minimizers of windows lying inside an occurrence are text
minimizers, which is why the pattern's gaps are always text keys.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import List, Optional, Tuple, Union

import numpy as np

from .grams import GramClasses, collect, merge_store
from .search import CountResult, backward_count
from .store import QGramStore, StoreConfig, check_text_size
from .text import SuffixArray, Text, as_pattern, build_suffix_array


@dataclass(frozen=True)
class MinimizerParams:
    q: int = 8
    p: int = 3

    def __post_init__(self):
        if not 1 <= self.p <= self.q <= 255:
            raise ValueError(f"need 1 <= p <= q <= 255, got q={self.q}, p={self.p}")

    @property
    def max_gap(self) -> int:
        return self.q - self.p + 1


def minimizer_positions(s: bytes, params: MinimizerParams) -> List[int]:
    """Sorted, deduplicated 1-based starts of the minimizers of all windows.

    The current minimizer is kept while it stays inside the window, and only
    replaced early by a strictly smaller entering p-gram, which preserves
    the leftmost tie-break.
    """
    q, p = params.q, params.p
    size = len(s)
    if size < q:
        return []
    grams = [s[u : u + p] for u in range(size - p + 1)]
    width = q - p + 1
    key = grams.__getitem__
    best = min(range(width), key=key)
    out = [best + 1]
    for t in range(1, size - q + 1):
        new = t + width - 1
        if best < t:
            best = min(range(t, new + 1), key=key)
        elif grams[new] < grams[best]:
            best = new
        if best + 1 != out[-1]:
            out.append(best + 1)
    return out


def sliding_min(a: np.ndarray, w: int) -> np.ndarray:
    """Minimum of every length-``w`` window of ``a`` (van Herk / Gil-Werman)."""
    size = len(a)
    if w < 1 or size < w:
        return np.zeros(0, dtype=a.dtype)
    nb = -(-size // w)
    padded = np.full(nb * w, np.iinfo(a.dtype).max, dtype=a.dtype)
    padded[:size] = a
    blocks = padded.reshape(nb, w)
    pref = np.minimum.accumulate(blocks, axis=1).ravel()
    suf = np.minimum.accumulate(blocks[:, ::-1], axis=1)[:, ::-1].ravel()
    return np.minimum(suf[: size - w + 1], pref[w - 1 : size])


def text_minimizers(classes: GramClasses, params: MinimizerParams) -> np.ndarray:
    """Vectorised :func:`minimizer_positions` over the whole text (1-based)."""
    n = classes.text.n
    q, p = params.q, params.p
    if n < q:
        return np.zeros(0, dtype=np.int64)
    lvl = classes.level(p)
    count = n - p + 1
    gram_id = np.empty(n + 1, dtype=np.int64)
    gram_id[classes.starts0[lvl.rows]] = lvl.group
    key = gram_id[:count] * (n + 1) + np.arange(count, dtype=np.int64)
    best = sliding_min(key, q - p + 1) % (n + 1)
    return np.unique(best) + 1


class LinearIndex:
    variant = 2

    def __init__(
        self,
        text: Text,
        store: QGramStore,
        params: MinimizerParams,
        sa: Optional[SuffixArray] = None,
        text_minimizers: Optional[np.ndarray] = None,
    ):
        self.text = text
        self.store = store
        self.params = params
        if sa is not None:
            self.__dict__["sa"] = sa
        if text_minimizers is not None:
            self.__dict__["text_minimizers"] = text_minimizers

    @cached_property
    def sa(self) -> SuffixArray:
        return build_suffix_array(self.text)

    @cached_property
    def text_minimizers(self) -> np.ndarray:
        return text_minimizers(GramClasses(self.text, self.sa), self.params)

    def count(self, pattern: Union[bytes, str], trace=None) -> CountResult:
        return count_linear(self, pattern, trace)

    def __repr__(self):
        return f"LinearIndex(n={self.text.n}, q={self.params.q}, p={self.params.p}, {self.store!r})"


def build_linear(
    t: Text, params: Optional[MinimizerParams] = None, config: Optional[StoreConfig] = None
) -> LinearIndex:
    params = params or MinimizerParams()
    check_text_size(t.n)
    sa = build_suffix_array(t)
    classes = GramClasses(t, sa)
    mins = text_minimizers(classes, params)

    batches = [collect(classes, classes.level(1))]
    gap_start = mins[:-1] - 1
    gap_len = np.diff(mins)
    for size in np.unique(gap_len[gap_len > 1]).tolist():
        lvl = classes.level(size)
        n_groups = int(lvl.group[-1]) + 1 if len(lvl.group) else 0
        selected = np.zeros(n_groups, dtype=bool)
        selected[classes.group_of_positions(lvl, gap_start[gap_len == size])] = True
        batches.append(collect(classes, lvl, selected))
    del classes
    store = merge_store(t, batches, config)
    return LinearIndex(t, store, params, sa.without_levels(), mins)


def pattern_chunks(p: bytes, params: MinimizerParams) -> List[Tuple[int, int]]:
    """Right-to-left (1-based start, length) steps for a pattern."""
    m = len(p)
    mins = minimizer_positions(p, params)
    if not mins:
        return [(j, 1) for j in range(m, 0, -1)]
    chunks = [(j, 1) for j in range(m, mins[-1] - 1, -1)]
    for j in range(len(mins) - 2, -1, -1):
        chunks.append((mins[j], mins[j + 1] - mins[j]))
    chunks.extend((j, 1) for j in range(mins[0] - 1, 0, -1))
    return chunks


def count_linear(idx: LinearIndex, p: Union[bytes, str], trace=None) -> CountResult:
    p = as_pattern(p)
    n = idx.text.n
    if len(p) > n:
        return CountResult(0, 0, 1, 0)
    return backward_count(idx.store, p, pattern_chunks(p, idx.params), n, trace)
