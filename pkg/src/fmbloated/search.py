"""Multi-symbol backward search shared by both index variants."""
from __future__ import annotations

from typing import Iterable, List, NamedTuple, Optional, Tuple

from .store import QGramStore


class CountResult(NamedTuple):
    count: int
    steps: int
    sp: int
    ep: int


def backward_count(
    store: QGramStore,
    pattern: bytes,
    chunks: Iterable[Tuple[int, int]],
    n: int,
    trace: Optional[List[Tuple[int, int]]] = None,
) -> CountResult:
    """Run LF-mapping steps over ``chunks`` (1-based start, length), given
    right to left.

    The range starts as every suffix of the sentinel-terminated text,
    ``[1, n + 1]``.  Each chunk ``x`` maps ``[sp, ep]`` to
    ``[C[x] + Occ(L_x, sp - 1) + 1, C[x] + Occ(L_x, ep)]``.  A chunk that is
    not a key ends the search with count 0.  ``steps`` counts every chunk
    looked up, including the one that ended the search.
    """
    sp, ep = 1, n + 1
    steps = 0
    find = store.find
    occ = store.occ_at
    base = store.count_base_at
    for start, length in chunks:
        steps += 1
        k = find(pattern[start - 1 : start - 1 + length])
        if k < 0:
            return CountResult(0, steps, sp, sp - 1)
        c = base(k)
        sp = c + occ(k, sp - 1) + 1
        ep = c + occ(k, ep)
        if trace is not None:
            trace.append((sp, ep))
        if sp > ep:
            return CountResult(0, steps, sp, ep)
    return CountResult(ep - sp + 1, steps, sp, ep)
