"""Hash table from q-grams to occurrence lists, and the Occ predecessor query.

Keys are never copied: a key is a (text position, length) pair and two keys
are equal when the text substrings they reference are byte-wise equal.  All
per-key data lives in flat numpy arrays (struct-of-arrays), and the buckets
are one contiguous int array of key ids, resolved by linear probing.

The query-side methods (:meth:`QGramStore.find`, :meth:`QGramStore.occ_at`)
work on memoryviews of those arrays, which index to plain Python ints and
keep the per-step cost of a backward search low.
"""
from __future__ import annotations

from bisect import bisect_right
from dataclasses import dataclass, field
from operator import mul
from typing import Dict, Iterator, Optional, Sequence, Tuple

import numpy as np

from .text import InvalidInputError, Text, index_dtype

MASK64 = (1 << 64) - 1
HASH_BASE = 0x9E3779B97F4A7C15  # odd, so invertible mod 2**64
_HASH_BASE_INV = pow(HASH_BASE, -1, 1 << 64)
MAX_KEY_LEN = 255
MAX_TEXT = (1 << 32) - 1  # n + 1 must fit a u32 rank

_POW = [pow(HASH_BASE, k, 1 << 64) for k in range(MAX_KEY_LEN + 1)]


class DuplicateKeyError(KeyError):
    """Inserted a q-gram whose bytes are already a key of the store."""


class TextTooLargeError(InvalidInputError):
    """Text has n + 1 >= 2**32 and ranks no longer fit 32 bits."""


def check_text_size(n: int) -> None:
    if n + 1 >= MAX_TEXT + 1:
        raise TextTooLargeError(f"text of {n} symbols does not fit 32-bit ranks")


def hash_bytes(s: bytes) -> int:
    """Polynomial hash ``sum(s[k] * B**k) mod 2**64``."""
    return sum(map(mul, s, _POW)) & MASK64


# Fibonacci hashing: the bucket is the top bits of ``h * FIB_MULT``.
FIB_MULT = 0x9E3779B97F4A7C15 ^ 0xBF58476D1CE4E5B9


def home_slot(h: int, bits: int) -> int:
    return ((h * FIB_MULT) & MASK64) >> (64 - bits)


def _home_slots_np(h: np.ndarray, bits: int) -> np.ndarray:
    with np.errstate(over="ignore"):
        return (h * np.uint64(FIB_MULT)) >> np.uint64(64 - bits)


class TextHasher:
    """Vectorised :func:`hash_bytes` for arbitrary substrings of one text."""

    def __init__(self, arr: np.ndarray):
        size = len(arr)
        with np.errstate(over="ignore"):
            pw = np.empty(size, dtype=np.uint64)
            pw[0] = 1
            pw[1:] = HASH_BASE
            np.multiply.accumulate(pw, out=pw)
            inv = np.empty(size, dtype=np.uint64)
            inv[0] = 1
            inv[1:] = _HASH_BASE_INV
            np.multiply.accumulate(inv, out=inv)
            prefix = np.zeros(size + 1, dtype=np.uint64)
            np.cumsum(arr.astype(np.uint64) * pw, out=prefix[1:])
        self._prefix = prefix
        self._inv = inv

    def hashes(self, starts: np.ndarray, lengths: np.ndarray) -> np.ndarray:
        """Hashes of ``text[starts[i] : starts[i] + lengths[i]]`` (0-based)."""
        starts = np.asarray(starts, dtype=np.int64)
        ends = starts + np.asarray(lengths, dtype=np.int64)
        with np.errstate(over="ignore"):
            return (self._prefix[ends] - self._prefix[starts]) * self._inv[starts]


@dataclass(frozen=True)
class StoreConfig:
    """Tuning knobs of the store.  Defaults fit one 64-byte line of u32 ranks."""

    qa_len: int = 16
    bs_threshold: int = 16
    max_load: float = 0.75

    def __post_init__(self):
        if self.qa_len < 0:
            raise ValueError("qa_len must be >= 0")
        if self.bs_threshold < 1:
            raise ValueError("bs_threshold must be >= 1")
        if not 0 < self.max_load < 1:
            raise ValueError("max_load must be in (0, 1)")


@dataclass(frozen=True)
class QGramKey:
    text_pos: int  # 1-based
    len: int


@dataclass(frozen=True)
class QAList:
    """Percentile samples of a positions list: values and 1-based indices."""

    values: Tuple[int, ...] = ()
    indices: Tuple[int, ...] = ()

    def __len__(self):
        return len(self.values)


@dataclass(frozen=True, eq=False)
class OccList:
    count_base: int
    positions: np.ndarray
    qa: QAList = field(default_factory=QAList)

    def __len__(self):
        return len(self.positions)


def build_qa(positions: Sequence[int], qa_len: int, bs_threshold: int = 16) -> QAList:
    """Sample ``positions`` at the indices ``ceil(k * len / (qa_len + 1))``."""
    size = len(positions)
    if qa_len <= 0 or size < bs_threshold:
        return QAList()
    idx = [-(-k * size // (qa_len + 1)) for k in range(1, qa_len + 1)]
    return QAList(tuple(int(positions[i - 1]) for i in idx), tuple(idx))


def occ_linear(positions: Sequence[int], pos: int) -> int:
    i = 0
    size = len(positions)
    while i < size and positions[i] <= pos:
        i += 1
    return i


def occ_binary(positions: Sequence[int], pos: int) -> int:
    return bisect_right(positions, pos)


def occ_qa(positions: Sequence[int], qa: QAList, pos: int) -> int:
    """Locate ``pos`` among the QA samples, then binary search one segment."""
    j = bisect_right(qa.values, pos)
    lo = qa.indices[j - 1] if j else 0
    hi = qa.indices[j] - 1 if j < len(qa) else len(positions)
    return bisect_right(positions, pos, lo, hi)


def occ(lst: OccList, pos: int, bs_threshold: int = 16) -> int:
    """Number of entries of ``lst.positions`` that are <= ``pos``."""
    positions = lst.positions
    if len(positions) < bs_threshold:
        return occ_linear(positions, pos)
    return occ_qa(positions, lst.qa, pos)


def _capacity_for(count: int, max_load: float) -> int:
    cap = 8
    while count > max_load * cap:
        cap *= 2
    return cap


def _place(homes: np.ndarray, capacity: int) -> np.ndarray:
    """Linear-probing bucket array for keys with the given home slots.

    Inserting keys in order of home slot makes each probe cluster a run, so
    the final slot of the k-th key is ``k + max_{j<=k}(home_j - j)``.  Keys
    pushed past the end wrap around and are placed one by one.
    """
    dtype = np.int32 if len(homes) < 2**31 - 1 else np.int64
    slots = np.full(capacity, -1, dtype=dtype)
    if len(homes) == 0:
        return slots
    order = np.argsort(homes, kind="stable")
    target = homes[order].astype(np.int64)
    ramp = np.arange(len(order), dtype=np.int64)
    target -= ramp
    np.maximum.accumulate(target, out=target)
    target += ramp
    del ramp
    inside = target < capacity
    slots[target[inside]] = order[inside]
    del target
    mask = capacity - 1
    outside = ~inside
    for key_id, home in zip(order[outside].tolist(), homes[order[outside]].tolist()):
        i = home & mask
        while slots[i] >= 0:
            i = (i + 1) & mask
        slots[i] = key_id
    return slots


class _Buffer:
    """Append-only numpy array with amortised doubling."""

    def __init__(self, dtype, data=None):
        data = np.zeros(0, dtype=dtype) if data is None else np.asarray(data, dtype=dtype)
        self._data = data
        self.size = len(data)

    @property
    def view(self) -> np.ndarray:
        return self._data[: self.size]

    def extend(self, values) -> None:
        values = np.asarray(values, dtype=self._data.dtype)
        need = self.size + len(values)
        if need > len(self._data):
            grown = np.empty(max(need, 2 * len(self._data), 16), dtype=self._data.dtype)
            grown[: self.size] = self.view
            self._data = grown
        self._data[self.size : need] = values
        self.size = need


class QGramStore:
    """Open-addressing hash table of q-gram keys over one text."""

    def __init__(self, text: Text, config: Optional[StoreConfig] = None):
        check_text_size(text.n)
        self.text = text
        self.config = config or StoreConfig()
        self._data = text.payload
        self._hasher: Optional[TextHasher] = None
        self._key_pos = _Buffer(np.uint32)
        self._key_len = _Buffer(np.uint8)
        self._count_base = _Buffer(np.uint32)
        self._ends = _Buffer(np.int64)
        self._pool = _Buffer(np.uint32)
        self._qa_row: Dict[int, int] = {}
        self._qa_values = _Buffer(np.uint32)
        self._qa_indices = _Buffer(np.int64)
        self._slots = np.full(8, -1, dtype=np.int32)
        self._refresh()

    # -- construction ---------------------------------------------------

    @classmethod
    def from_arrays(
        cls,
        text: Text,
        key_pos: np.ndarray,
        key_len: np.ndarray,
        count_base: np.ndarray,
        list_lens: np.ndarray,
        pool: np.ndarray,
        config: Optional[StoreConfig] = None,
        hasher: Optional[TextHasher] = None,
    ) -> "QGramStore":
        """Bulk-load keys known to be distinct (no duplicate check).

        ``key_pos`` is 1-based; ``pool`` holds every list back to back in key
        order, ``list_lens`` giving each list's length.
        """
        store = cls(text, config)
        store._hasher = hasher
        ends_dtype = np.uint32 if len(pool) < 2**32 else np.int64
        ends = np.cumsum(list_lens, dtype=ends_dtype)
        if len(ends) and ends[-1] != len(pool):
            raise ValueError("list lengths do not add up to the pool size")
        store._key_pos = _Buffer(np.uint32, key_pos)
        store._key_len = _Buffer(np.uint8, key_len)
        store._count_base = _Buffer(np.uint32, count_base)
        store._ends = _Buffer(ends_dtype, ends)
        store._pool = _Buffer(np.uint32, pool)
        store._rebuild_qa()
        store._rehash(_capacity_for(len(key_pos), store.config.max_load))
        return store

    def _text_hasher(self) -> TextHasher:
        if self._hasher is None:
            self._hasher = TextHasher(self.text.array)
        return self._hasher

    def _rehash(self, capacity: int) -> None:
        hasher = self._text_hasher()
        homes = np.empty(len(self), dtype=index_dtype(capacity))
        bits = capacity.bit_length() - 1
        step = 1 << 22
        for k0 in range(0, len(self), step):
            starts = self._key_pos.view[k0 : k0 + step].astype(np.int64) - 1
            hashes = hasher.hashes(starts, self._key_len.view[k0 : k0 + step])
            homes[k0 : k0 + len(starts)] = _home_slots_np(hashes, bits)
        self._slots = np.zeros(0, dtype=np.int32)
        self._slots = _place(homes, capacity)
        self._refresh()

    def _rebuild_qa(self) -> None:
        qa_len = self.config.qa_len
        ends = self._ends.view
        lens = np.diff(ends, prepend=0)
        longs = np.nonzero(lens >= self.config.bs_threshold)[0] if qa_len > 0 else np.zeros(0, np.int64)
        lens = lens[longs].astype(np.int64)
        starts = ends[longs].astype(np.int64) - lens
        longs = longs.astype(np.int64)
        k = np.arange(1, qa_len + 1, dtype=np.int64)
        # ceil(k * len / (qa_len + 1)) for every long list at once
        idx = -(-(lens[:, None] * k[None, :]) // (qa_len + 1))
        vals = self._pool.view[starts[:, None] + idx - 1] if len(longs) else np.zeros((0, qa_len))
        self._qa_row = dict(zip(longs.tolist(), range(len(longs))))
        self._qa_values = _Buffer(np.uint32, np.asarray(vals).reshape(-1))
        self._qa_indices = _Buffer(np.int64, idx.reshape(-1))

    def _refresh(self) -> None:
        self._mask = len(self._slots) - 1
        self._shift = 65 - len(self._slots).bit_length()
        self._mv_slots = memoryview(self._slots)
        self._mv_pos = memoryview(self._key_pos.view)
        self._mv_len = memoryview(self._key_len.view)
        self._mv_base = memoryview(self._count_base.view)
        self._mv_ends = memoryview(self._ends.view)
        self._mv_pool = memoryview(self._pool.view)
        self._mv_qav = memoryview(self._qa_values.view)
        self._mv_qai = memoryview(self._qa_indices.view)
        self._qa_len = self.config.qa_len

    def insert(self, key: QGramKey, lst: OccList) -> None:
        """Add one key with its list, doubling the table past ``max_load``."""
        if not 1 <= key.len <= MAX_KEY_LEN:
            raise ValueError(f"key length {key.len} outside 1..{MAX_KEY_LEN}")
        if key.text_pos < 1 or key.text_pos + key.len - 1 > self.text.n:
            raise ValueError("key does not reference a payload substring")
        s = self._data[key.text_pos - 1 : key.text_pos - 1 + key.len]
        if self.find(s) >= 0:
            raise DuplicateKeyError(s)
        positions = np.asarray(lst.positions, dtype=np.int64)
        if len(positions) and (
            positions[0] < 1 or positions[-1] > self.text.n + 1 or np.any(np.diff(positions) <= 0)
        ):
            raise ValueError("positions must be strictly ascending ranks in 1..n+1")
        if lst.count_base + len(positions) > self.text.n + 1:
            raise ValueError("count_base + |positions| exceeds n + 1")

        key_id = len(self)
        self._key_pos.extend([key.text_pos])
        self._key_len.extend([key.len])
        self._count_base.extend([lst.count_base])
        self._ends.extend([self._pool.size + len(positions)])
        self._pool.extend(positions)
        qa = build_qa(positions, self.config.qa_len, self.config.bs_threshold)
        if len(qa):
            self._qa_row[key_id] = self._qa_values.size // self.config.qa_len
            self._qa_values.extend(qa.values)
            self._qa_indices.extend(qa.indices)

        if len(self) > self.config.max_load * len(self._slots):
            self._rehash(2 * len(self._slots))
            return
        i = ((hash_bytes(s) * FIB_MULT) & MASK64) >> self._shift
        while self._slots[i] >= 0:
            i = (i + 1) & self._mask
        self._slots[i] = key_id
        self._refresh()

    # -- queries ----------------------------------------------------------

    def find(self, s: bytes) -> int:
        """Key id whose bytes equal ``s``, or -1."""
        size = len(s)
        if size > MAX_KEY_LEN:
            return -1
        slots = self._mv_slots
        klen = self._mv_len
        kpos = self._mv_pos
        data = self._data
        mask = self._mask
        i = (((sum(map(mul, s, _POW)) & MASK64) * FIB_MULT) & MASK64) >> self._shift
        while True:
            k = slots[i]
            if k < 0:
                return -1
            if klen[k] == size:
                start = kpos[k] - 1
                if data[start : start + size] == s:
                    return k
            i = (i + 1) & mask

    def count_base_at(self, k: int) -> int:
        return self._mv_base[k]

    def occ_at(self, k: int, pos: int) -> int:
        """:func:`occ` on the list of key id ``k``, without building an OccList."""
        ends = self._mv_ends
        pool = self._mv_pool
        end = ends[k]
        lo = ends[k - 1] if k else 0
        if end - lo < self.config.bs_threshold:
            i = lo
            while i < end and pool[i] <= pos:
                i += 1
            return i - lo
        off = lo
        hi = end
        row = self._qa_row.get(k)
        if row is not None:
            first = row * self._qa_len
            last = first + self._qa_len
            j = bisect_right(self._mv_qav, pos, first, last)
            if j > first:
                lo = off + self._mv_qai[j - 1]
            if j < last:
                hi = off + self._mv_qai[j] - 1
        return bisect_right(pool, pos, lo, hi) - off

    def list_at(self, k: int) -> OccList:
        ends = self._ends.view
        lo = int(ends[k - 1]) if k else 0
        positions = self._pool.view[lo : int(ends[k])]
        row = self._qa_row.get(k)
        qa = QAList()
        if row is not None:
            q = self.config.qa_len
            qa = QAList(
                tuple(self._qa_values.view[row * q : (row + 1) * q].tolist()),
                tuple(self._qa_indices.view[row * q : (row + 1) * q].tolist()),
            )
        return OccList(int(self._count_base.view[k]), positions, qa)

    def lookup(self, s: bytes) -> Optional[OccList]:
        if not s:
            raise ValueError("lookup of an empty q-gram")
        k = self.find(bytes(s))
        return None if k < 0 else self.list_at(k)

    def key_at(self, k: int) -> QGramKey:
        return QGramKey(int(self._key_pos.view[k]), int(self._key_len.view[k]))

    def keys(self) -> Iterator[bytes]:
        for pos, size in zip(self._key_pos.view.tolist(), self._key_len.view.tolist()):
            yield self._data[pos - 1 : pos - 1 + size]

    # -- introspection ------------------------------------------------------

    def __len__(self):
        return self._key_pos.size

    def __contains__(self, s):
        return self.find(bytes(s)) >= 0

    @property
    def capacity(self) -> int:
        return len(self._slots)

    @property
    def key_pos(self) -> np.ndarray:
        return self._key_pos.view

    @property
    def key_len(self) -> np.ndarray:
        return self._key_len.view

    @property
    def count_base(self) -> np.ndarray:
        return self._count_base.view

    @property
    def list_lens(self) -> np.ndarray:
        return np.diff(self._ends.view, prepend=0)

    @property
    def pool(self) -> np.ndarray:
        return self._pool.view

    @property
    def total_entries(self) -> int:
        return self._pool.size

    def __repr__(self):
        return (
            f"QGramStore(keys={len(self)}, capacity={self.capacity}, "
            f"entries={self.total_entries})"
        )
