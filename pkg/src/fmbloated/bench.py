"""Query-time benchmark and index statistics.

Patterns are substrings taken at random offsets of the indexed text, timed
per length and normalised per pattern character.
"""
from __future__ import annotations

import csv
import logging
import time
from dataclasses import asdict, dataclass, field
from typing import Dict, Iterable, List, Optional, Sequence, TextIO, Union

import numpy as np

from .linear import LinearIndex
from .serialize import Index, serialized_size
from .superlinear import SuperlinearIndex
from .text import Text

log = logging.getLogger(__name__)

CSV_COLUMNS = ("variant", "scheme", "q", "p", "m", "queries", "total_ns", "ns_per_char", "avg_steps", "matched")
DEFAULT_QUERIES = 10**6


def sample_patterns(t: Text, m: int, k: int, seed: int = 0) -> List[bytes]:
    """``k`` length-``m`` substrings of ``t`` at uniform random offsets."""
    if not 1 <= m <= t.n:
        raise ValueError(f"pattern length {m} outside 1..{t.n}")
    rng = np.random.default_rng(seed)
    starts = rng.integers(0, t.n - m + 1, size=k).tolist()
    data = t.payload
    return [data[s : s + m] for s in starts]


@dataclass
class BenchConfig:
    pattern_lengths: Sequence[int]
    queries_per_length: int = DEFAULT_QUERIES
    seed: int = 0
    warmup_fraction: float = 0.01

    def __post_init__(self):
        if self.queries_per_length < 1:
            raise ValueError("queries_per_length must be >= 1")
        if any(m < 1 for m in self.pattern_lengths):
            raise ValueError("pattern lengths must be >= 1")


@dataclass
class BenchRow:
    variant: str
    scheme: str
    q: int
    p: int
    m: int
    queries: int
    total_ns: int
    ns_per_char: float
    avg_steps: float
    matched: int


def describe(index: Index) -> Dict[str, object]:
    if isinstance(index, SuperlinearIndex):
        return {"variant": "superlinear", "scheme": index.scheme.kind, "q": 0, "p": 0}
    return {"variant": "linear", "scheme": "n/a", "q": index.params.q, "p": index.params.p}


def _seed_for(seed: int, m: int) -> int:
    return seed * 1_000_003 + m


def run_bench(index: Index, config: BenchConfig) -> List[BenchRow]:
    """One row per pattern length; lengths above n are skipped with a warning."""
    meta = describe(index)
    count = index.count
    rows = []
    for m in config.pattern_lengths:
        if m > index.text.n:
            log.warning("skipping m=%d: longer than the text (n=%d)", m, index.text.n)
            continue
        k = config.queries_per_length
        patterns = sample_patterns(index.text, m, k, _seed_for(config.seed, m))
        for pat in patterns[: max(1, int(k * config.warmup_fraction))]:
            count(pat)
        t0 = time.perf_counter_ns()
        for pat in patterns:
            count(pat)
        elapsed = time.perf_counter_ns() - t0
        # Steps and matches come from a separate, untimed pass.
        results = [count(pat) for pat in patterns]
        rows.append(
            BenchRow(
                **meta,
                m=m,
                queries=k,
                total_ns=elapsed,
                ns_per_char=elapsed / (k * m),
                avg_steps=sum(r.steps for r in results) / k,
                matched=sum(1 for r in results if r.count > 0),
            )
        )
    return rows


def write_csv(rows: Iterable[BenchRow], out: TextIO) -> None:
    writer = csv.DictWriter(out, fieldnames=CSV_COLUMNS, lineterminator="\n")
    writer.writeheader()
    for row in rows:
        rec = asdict(row)
        rec["ns_per_char"] = f"{row.ns_per_char:.3f}"
        rec["avg_steps"] = f"{row.avg_steps:.4f}"
        writer.writerow(rec)


def parse_lengths(spec: str) -> List[int]:
    """``"10..128"``, ``"16,24,64"`` or a mix such as ``"1..4,8"``."""
    out: List[int] = []
    for part in spec.split(","):
        part = part.strip()
        if not part:
            continue
        if ".." in part:
            lo, hi = part.split("..", 1)
            out.extend(range(int(lo), int(hi) + 1))
        else:
            out.append(int(part))
    if not out:
        raise ValueError(f"no pattern lengths in {spec!r}")
    return out


@dataclass
class IndexStats:
    n: int
    variant: str
    scheme: str
    q: int
    p: int
    max_len: int
    keys: int
    total_entries: int
    serialized_bytes: int
    bytes_per_symbol: float
    list_len_percentiles: Dict[str, float] = field(default_factory=dict)
    gap_keys: Optional[int] = None
    avg_minimizer_gap: Optional[float] = None

    def as_lines(self) -> List[str]:
        lines = []
        for name, value in asdict(self).items():
            if isinstance(value, dict):
                value = " ".join(f"{k}={v:g}" for k, v in value.items())
            elif isinstance(value, float):
                value = f"{value:.4f}"
            lines.append(f"{name}: {value}")
        return lines


def index_stats(index: Index, serialized_bytes: Optional[int] = None) -> IndexStats:
    store = index.store
    size = serialized_size(index) if serialized_bytes is None else serialized_bytes
    lens = store.list_lens
    pct = {}
    if len(lens):
        for q in (50, 90, 99, 100):
            pct[f"p{q}"] = float(np.percentile(lens, q))
    gap = gap_keys = None
    max_len = 0
    if isinstance(index, LinearIndex):
        mins = index.text_minimizers
        gap = float(np.diff(mins).mean()) if len(mins) > 1 else None
        gap_keys = int(np.count_nonzero(store.key_len > 1))
    else:
        max_len = index.scheme.max_len
    meta = describe(index)
    return IndexStats(
        n=index.text.n,
        max_len=max_len,
        keys=len(store),
        total_entries=store.total_entries,
        serialized_bytes=size,
        bytes_per_symbol=size / index.text.n,
        list_len_percentiles=pct,
        gap_keys=gap_keys,
        avg_minimizer_gap=gap,
        **meta,
    )
