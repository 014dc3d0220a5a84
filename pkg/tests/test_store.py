import random

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from fmbloated.store import (
    DuplicateKeyError,
    OccList,
    QAList,
    QGramKey,
    QGramStore,
    StoreConfig,
    TextHasher,
    TextTooLargeError,
    build_qa,
    check_text_size,
    hash_bytes,
    occ,
    occ_binary,
    occ_linear,
    occ_qa,
)
from fmbloated.text import Text

from conftest import random_text

FIG3_POSITIONS = [4, 5, 11, 13, 77]


@pytest.fixture
def ab_text():
    return Text(b"ab" + b"x" * 100)


def test_insert_fig3_list(ab_text):
    store = QGramStore(ab_text)
    assert len(store) == 0
    store.insert(QGramKey(1, 2), OccList(2, np.array(FIG3_POSITIONS)))
    assert len(store) == 1
    got = store.lookup(b"ab")
    assert got.count_base == 2
    assert len(got) == 5
    assert got.positions.tolist() == FIG3_POSITIONS


def test_lookup_empty_store(ab_text):
    assert QGramStore(ab_text).lookup(b"ab") is None


def test_lookup_compares_bytes_not_hash_slots():
    t = Text(b"abcabdabe")
    store = QGramStore(t)
    store.insert(QGramKey(1, 3), OccList(0, np.array([1])))  # "abc"
    assert store.lookup(b"abc") is not None
    assert store.lookup(b"abd") is None
    assert store.lookup(b"abe") is None
    assert store.lookup(b"ab") is None


def test_duplicate_key_rejected():
    t = Text(b"abab")
    store = QGramStore(t)
    store.insert(QGramKey(1, 2), OccList(1, np.array([1, 3])))
    with pytest.raises(DuplicateKeyError):
        store.insert(QGramKey(3, 2), OccList(1, np.array([1, 3])))


def test_insert_validates_list():
    t = Text(b"abcd")
    store = QGramStore(t)
    with pytest.raises(ValueError):
        store.insert(QGramKey(1, 1), OccList(0, np.array([3, 2])))
    with pytest.raises(ValueError):
        store.insert(QGramKey(1, 1), OccList(0, np.array([9])))
    with pytest.raises(ValueError):
        store.insert(QGramKey(4, 2), OccList(0, np.array([1])))


def test_bulk_insert_1000_keys_with_growth():
    rng = random.Random(7)
    data = random_text(rng, 6000, 26)
    t = Text(data)
    store = QGramStore(t)
    model = {}
    while len(model) < 1000:
        pos = rng.randint(1, 5900)
        size = rng.randint(1, 12)
        s = data[pos - 1 : pos - 1 + size]
        if s in model:
            continue
        positions = sorted(rng.sample(range(1, t.n + 2), rng.randint(1, 40)))
        cb = rng.randint(0, t.n + 1 - len(positions))
        store.insert(QGramKey(pos, size), OccList(cb, np.array(positions)))
        model[s] = (cb, positions)
    assert len(store) == 1000
    assert len(store) <= store.config.max_load * store.capacity
    for s, (cb, positions) in model.items():
        got = store.lookup(s)
        assert got.count_base == cb and got.positions.tolist() == positions
    misses = 0
    for _ in range(500):
        s = random_text(rng, rng.randint(1, 12), 26)
        if s not in model:
            assert store.lookup(s) is None
            misses += 1
    assert misses > 0


@settings(max_examples=60, deadline=None)
@given(st.lists(st.tuples(st.integers(0, 150), st.integers(1, 6)), max_size=120))
def test_store_matches_plain_map_under_growth(keys):
    data = (b"abcab" * 40)[:155] + b"qrstuvwxyz"
    t = Text(data)
    store = QGramStore(t, StoreConfig(max_load=0.5))
    model = {}
    for i, (start, size) in enumerate(keys):
        s = data[start : start + size]
        if s in model:
            with pytest.raises(DuplicateKeyError):
                store.insert(QGramKey(start + 1, size), OccList(0, np.array([1])))
            continue
        store.insert(QGramKey(start + 1, size), OccList(i % 3, np.array([i % 50 + 1])))
        model[s] = (i % 3, [i % 50 + 1])
        assert len(store) <= 0.5 * store.capacity
    assert len(store) == len(model)
    for s, (cb, positions) in model.items():
        got = store.lookup(s)
        assert (got.count_base, got.positions.tolist()) == (cb, positions)
    assert sorted(store.keys()) == sorted(model)


def test_occ_examples():
    lst = OccList(2, np.array(FIG3_POSITIONS))
    assert occ(lst, 12) == 3
    assert occ(lst, 0) == 0
    assert occ(lst, 77) == 5
    assert occ(lst, 1000) == 5


def test_build_qa_percentiles():
    qa = build_qa(list(range(1, 101)), 3)
    assert qa.indices == (25, 50, 75)
    assert qa.values == (25, 50, 75)
    assert len(build_qa(list(range(1, 101)), 0)) == 0
    assert len(build_qa(list(range(1, 10)), 3, bs_threshold=16)) == 0


def test_qa_occ_matches_binary_random():
    rng = np.random.default_rng(3)
    for _ in range(10_000):
        size = int(rng.integers(16, 400))
        positions = np.sort(rng.choice(100_000, size=size, replace=False)) + 1
        qa = build_qa(positions, int(rng.integers(1, 24)))
        pos = int(rng.integers(0, 100_002))
        assert occ_qa(positions, qa, pos) == occ_binary(positions, pos)


@pytest.mark.parametrize("config", [StoreConfig(), StoreConfig(qa_len=0), StoreConfig(qa_len=3, bs_threshold=4)])
def test_store_fast_path_matches_occlist(config):
    rng = random.Random(11)
    data = random_text(rng, 300, 3)
    t = Text(data)
    store = QGramStore(t, config)
    for size in (1, 2, 3):
        for i in range(len(data) - size + 1):
            s = data[i : i + size]
            if s not in store:
                positions = sorted(rng.sample(range(1, t.n + 2), rng.randint(1, 120)))
                store.insert(QGramKey(i + 1, size), OccList(0, np.array(positions)))
    for k in range(len(store)):
        lst = store.list_at(k)
        assert len(lst.qa) == (config.qa_len if len(lst) >= config.bs_threshold and config.qa_len else 0)
        for pos in range(0, t.n + 2, 7):
            assert store.occ_at(k, pos) == occ(lst, pos, config.bs_threshold) == occ_linear(lst.positions, pos)


@settings(max_examples=200, deadline=None)
@given(st.binary(min_size=1, max_size=80), st.data())
def test_vectorised_hash_matches_scalar(data, draw):
    arr = np.frombuffer(data, dtype=np.uint8)
    h = TextHasher(arr)
    start = draw.draw(st.integers(0, len(data) - 1))
    size = draw.draw(st.integers(1, len(data) - start))
    assert int(h.hashes(np.array([start]), np.array([size]))[0]) == hash_bytes(data[start : start + size])


def test_from_arrays_wraparound_placement():
    # Small table, many keys: clusters reach the end of the bucket array.
    data = bytes(range(1, 256))
    t = Text(data)
    n_keys = 180
    store = QGramStore.from_arrays(
        t,
        key_pos=np.arange(1, n_keys + 1, dtype=np.uint32),
        key_len=np.ones(n_keys, dtype=np.uint8),
        count_base=np.arange(n_keys, dtype=np.uint32),
        list_lens=np.ones(n_keys, dtype=np.int64),
        pool=np.arange(1, n_keys + 1, dtype=np.uint32),
        config=StoreConfig(max_load=0.75),
    )
    assert store.capacity == 256
    for i in range(n_keys):
        lst = store.lookup(data[i : i + 1])
        assert lst.count_base == i and lst.positions.tolist() == [i + 1]
    assert store.lookup(data[200:201]) is None


def test_store_config_validation():
    with pytest.raises(ValueError):
        StoreConfig(qa_len=-1)
    with pytest.raises(ValueError):
        StoreConfig(bs_threshold=0)
    with pytest.raises(ValueError):
        StoreConfig(max_load=1.0)


def test_text_size_limit():
    check_text_size(2**32 - 2)
    with pytest.raises(TextTooLargeError):
        check_text_size(2**32 - 1)


def test_empty_qa_list_is_plain_binary_search():
    positions = list(range(2, 200, 3))
    for pos in range(0, 210):
        assert occ_qa(positions, QAList(), pos) == occ_binary(positions, pos) == occ_linear(positions, pos)
