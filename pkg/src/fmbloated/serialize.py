"""The FMB1 on-disk format.

Little-endian, fixed width::

    magic "FMB1" | version u8 | variant u8 | scheme u8 | q u8 | p u8 |
    max_len u8 | n u64 | payload[n] | key count u64 |
    per key: text_pos u32, len u8, count_base u32, list length u32,
             positions u32[list length]

Hash buckets and QA samples are derived data and are rebuilt on load.
"""
from __future__ import annotations

import struct
from pathlib import Path
from typing import BinaryIO, Iterator, Optional, Union

import numpy as np

from .linear import LinearIndex, MinimizerParams
from .store import QGramStore, StoreConfig
from .superlinear import FIBONACCI, POW2, Scheme, SuperlinearIndex
from .text import InvalidInputError, Text

MAGIC = b"FMB1"
VERSION = 1
SCHEME_CODES = {POW2: 0, FIBONACCI: 1}
NO_SCHEME = 255

_HEAD = struct.Struct("<4sBBBBBBQ")
_RECORD = np.dtype([("pos", "<u4"), ("len", "u1"), ("base", "<u4"), ("size", "<u4")])
_CHUNK_KEYS = 1 << 20

Index = Union[SuperlinearIndex, LinearIndex]


class FormatError(ValueError):
    """The byte stream is not a valid FMB1 index."""


class BadMagicError(FormatError):
    pass


class TruncatedStreamError(FormatError):
    pass


class UnsupportedVersionError(FormatError):
    pass


def _header(index: Index) -> bytes:
    if isinstance(index, SuperlinearIndex):
        fields = (1, SCHEME_CODES[index.scheme.kind], 0, 0, index.scheme.max_len)
    elif isinstance(index, LinearIndex):
        fields = (2, NO_SCHEME, index.params.q, index.params.p, 0)
    else:
        raise TypeError(f"cannot serialize {type(index).__name__}")
    return _HEAD.pack(MAGIC, VERSION, *fields, index.text.n)


def serialized_size(index: Index) -> int:
    store = index.store
    return _HEAD.size + index.text.n + 8 + _RECORD.itemsize * len(store) + 4 * store.total_entries


def iter_serialized(index: Index) -> Iterator[bytes]:
    """Yield the serialized index in pieces (whole records per piece)."""
    store = index.store
    yield _header(index)
    yield index.text.payload
    yield struct.pack("<Q", len(store))
    lens = store.list_lens
    ends = np.cumsum(lens)
    for k0 in range(0, len(store), _CHUNK_KEYS):
        k1 = min(k0 + _CHUNK_KEYS, len(store))
        rec = np.empty(k1 - k0, dtype=_RECORD)
        rec["pos"] = store.key_pos[k0:k1]
        rec["len"] = store.key_len[k0:k1]
        rec["base"] = store.count_base[k0:k1]
        rec["size"] = lens[k0:k1]
        e0 = int(ends[k0 - 1]) if k0 else 0
        e1 = int(ends[k1 - 1])
        body = store.pool[e0:e1].astype("<u4").view(np.uint8)
        seg = np.empty(2 * (k1 - k0), dtype=np.int64)
        seg[0::2] = _RECORD.itemsize
        seg[1::2] = 4 * lens[k0:k1]
        is_head = np.repeat(np.tile([True, False], k1 - k0), seg)
        out = np.empty(len(is_head), dtype=np.uint8)
        out[is_head] = rec.view(np.uint8)
        out[~is_head] = body
        yield out.tobytes()


def serialize(index: Index) -> bytes:
    return b"".join(iter_serialized(index))


def save(index: Index, path: Union[str, Path, BinaryIO]) -> int:
    """Write ``index`` to a path or binary file; returns bytes written."""
    if hasattr(path, "write"):
        return sum(path.write(piece) for piece in iter_serialized(index))
    with open(path, "wb") as fh:
        return save(index, fh)


def _record_starts(buf: bytes, start: int, count: int) -> np.ndarray:
    starts = np.empty(count, dtype=np.int64)
    size_at = struct.Struct("<I").unpack_from
    off = start
    total = len(buf)
    rec = _RECORD.itemsize
    for k in range(count):
        if off + rec > total:
            raise TruncatedStreamError(f"stream ends inside key record {k}")
        starts[k] = off
        off += rec + 4 * size_at(buf, off + 9)[0]
    if off > total:
        raise TruncatedStreamError("stream ends inside the last positions list")
    if off != total:
        raise FormatError(f"{total - off} trailing bytes after the last key")
    return starts


def deserialize(data: bytes, config: Optional[StoreConfig] = None) -> Index:
    """Parse an FMB1 stream and rebuild the hash table and QA lists."""
    data = bytes(data)
    if len(data) < 4 or data[:4] != MAGIC:
        raise BadMagicError("not an FMB1 stream")
    if len(data) < _HEAD.size:
        raise TruncatedStreamError("stream ends inside the header")
    _, version, variant, scheme, q, p, max_len, n = _HEAD.unpack_from(data)
    if version != VERSION:
        raise UnsupportedVersionError(f"format version {version} (expected {VERSION})")
    if variant not in (1, 2):
        raise FormatError(f"unknown variant {variant}")
    body = _HEAD.size
    if len(data) < body + n + 8:
        raise TruncatedStreamError("stream ends inside the text payload")
    try:
        text = Text(data[body : body + n])
    except InvalidInputError as exc:
        raise FormatError(f"bad text payload: {exc}") from None
    (count,) = struct.unpack_from("<Q", data, body + n)
    first = body + n + 8

    starts = _record_starts(data, first, count)
    raw = np.frombuffer(data, dtype=np.uint8)
    heads = np.empty(count, dtype=_RECORD)
    span = np.arange(_RECORD.itemsize)
    for k0 in range(0, count, _CHUNK_KEYS):
        part = starts[k0 : k0 + _CHUNK_KEYS]
        heads[k0 : k0 + len(part)] = raw[part[:, None] + span].view(_RECORD).reshape(-1)
    lens = heads["size"].astype(np.int64)
    if count:
        seg = np.empty(2 * count, dtype=np.int64)
        seg[0::2] = _RECORD.itemsize
        seg[1::2] = 4 * lens
        is_head = np.repeat(np.tile([True, False], count), seg)
        pool = raw[first:][~is_head].view("<u4").astype(np.uint32)
    else:
        pool = np.zeros(0, dtype=np.uint32)
    key_pos = heads["pos"].astype(np.uint32)
    key_len = heads["len"].astype(np.uint8)
    if count and (
        key_len.min() < 1 or (key_pos.astype(np.int64) + key_len - 1).max() > n or key_pos.min() < 1
    ):
        raise FormatError("key record points outside the text")
    store = QGramStore.from_arrays(text, key_pos, key_len, heads["base"].astype(np.uint32), lens, pool, config)
    try:
        if variant == 1:
            kind = {v: k for k, v in SCHEME_CODES.items()}.get(scheme)
            if kind is None:
                raise FormatError(f"unknown scheme code {scheme}")
            return SuperlinearIndex(text, store, Scheme(kind, max_len))
        return LinearIndex(text, store, MinimizerParams(q, p))
    except ValueError as exc:
        if isinstance(exc, FormatError):
            raise
        raise FormatError(f"bad header parameters: {exc}") from None


def load(path: Union[str, Path], config: Optional[StoreConfig] = None) -> Index:
    return deserialize(Path(path).read_bytes(), config)
