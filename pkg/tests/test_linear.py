import random

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from fmbloated.grams import GramClasses
from fmbloated.linear import (
    MinimizerParams,
    build_linear,
    count_linear,
    minimizer_positions,
    pattern_chunks,
    sliding_min,
    text_minimizers,
)
from fmbloated.text import Text, build_suffix_array, sa_range_of

from conftest import absent_patterns, brute_minimizers, brute_occ_list, brute_sa, random_text, substring_counts

PARAMS = [(1, 1), (4, 2), (8, 3), (12, 4)]


def test_mississippi_minimizers():
    assert minimizer_positions(b"mississippi", MinimizerParams(4, 2)) == [2, 5, 8]


def test_leftmost_tie_break():
    assert minimizer_positions(b"aaaa", MinimizerParams(3, 1)) == [1, 2]


def test_no_window_fits():
    assert minimizer_positions(b"abc", MinimizerParams(4, 1)) == []
    assert minimizer_positions(b"abc", MinimizerParams(4, 4)) == []


@pytest.mark.parametrize("q,p", [(2, 4), (0, 0), (256, 1), (5, 0)])
def test_params_validation(q, p):
    with pytest.raises(ValueError):
        MinimizerParams(q, p)


@settings(max_examples=300, deadline=None)
@given(
    st.binary(min_size=0, max_size=50).map(lambda b: bytes(97 + x % 3 for x in b)),
    st.integers(1, 9),
    st.integers(1, 9),
)
def test_minimizers_match_brute_force(s, q, p):
    if p > q:
        q, p = p, q
    params = MinimizerParams(q, p)
    got = minimizer_positions(s, params)
    assert got == brute_minimizers(s, q, p)
    assert all(b - a <= q - p + 1 for a, b in zip(got, got[1:]))
    assert all(u <= len(s) - p + 1 for u in got)


@pytest.mark.parametrize("q,p", PARAMS + [(3, 3), (20, 1), (9, 8)])
def test_text_minimizers_vectorised(q, p):
    rng = random.Random(q * 31 + p)
    for sigma in (2, 4, 26):
        for n in (1, q - 1, q, 250):
            if n < 1:
                continue
            data = random_text(rng, n, sigma)
            t = Text(data)
            got = text_minimizers(GramClasses(t, build_suffix_array(t)), MinimizerParams(q, p))
            assert got.tolist() == brute_minimizers(data, q, p)


@settings(max_examples=100, deadline=None)
@given(st.lists(st.integers(-50, 50), min_size=1, max_size=40), st.integers(1, 12))
def test_sliding_min(values, w):
    a = np.array(values, dtype=np.int64)
    want = [min(values[i : i + w]) for i in range(len(values) - w + 1)]
    assert sliding_min(a, w).tolist() == want


def test_mississippi_gap_keys():
    idx = build_linear(Text(b"mississippi"), MinimizerParams(4, 2))
    keys = set(idx.store.keys())
    assert keys == {b"m", b"i", b"s", b"p", b"iss"}
    assert len(idx.store.lookup(b"iss")) == 2
    assert idx.text_minimizers.tolist() == [2, 5, 8]


def test_short_text_has_only_unigrams():
    idx = build_linear(Text(b"abcab"), MinimizerParams(8, 3))
    assert sorted(idx.store.keys()) == [b"a", b"b", b"c"]
    assert idx.count(b"cab").count == 1


def test_ssis_walkthrough():
    idx = build_linear(Text(b"mississippi"), MinimizerParams(4, 2))
    assert minimizer_positions(b"ssis", idx.params) == [3]
    assert pattern_chunks(b"ssis", idx.params) == [(4, 1), (3, 1), (2, 1), (1, 1)]
    res = count_linear(idx, b"ssis")
    assert res.count == 1 and res.steps == 4
    assert idx.count(b"xyz").count == 0
    assert idx.count(b"mississippi!").count == 0


def classic_backward_trace(data: bytes, pat: bytes):
    """Character-level FM backward search from a brute-force BWT."""
    term = data + b"\x00"
    sa = brute_sa(data)
    bwt = bytes(term[i - 2] if i > 1 else 0 for i in sa)
    trace = []
    sp, ep = 1, len(term)
    for c in reversed(pat):
        smaller = sum(1 for x in term if x < c)
        sp = smaller + bwt[: sp - 1].count(c) + 1
        ep = smaller + bwt[:ep].count(c)
        trace.append((sp, ep))
        if sp > ep:
            break
    return trace


def test_unit_params_equal_classic_backward_search():
    rng = random.Random(4)
    data = random_text(rng, 120, 3)
    idx = build_linear(Text(data), MinimizerParams(1, 1))
    for _ in range(100):
        m = rng.randint(1, 15)
        pat = random_text(rng, m, 3)
        trace = []
        res = idx.count(pat, trace)
        assert trace == classic_backward_trace(data, pat)
        assert res.steps == len(trace)


@pytest.mark.parametrize("q,p", PARAMS)
@pytest.mark.parametrize("sigma", [2, 4, 26])
def test_oracle_equivalence(q, p, sigma):
    rng = random.Random(f"{q}-{p}-{sigma}")
    for n in (3, 64, 400):
        data = random_text(rng, n, sigma)
        idx = build_linear(Text(data), MinimizerParams(q, p))
        for pat, want in substring_counts(data, 64).items():
            assert idx.count(pat).count == want
        for pat in absent_patterns(rng, data, sigma, 40, max_len=64):
            assert idx.count(pat).count == 0


@pytest.mark.parametrize("q,p", PARAMS)
def test_lists_are_complete(q, p):
    rng = random.Random(q)
    data = random_text(rng, 200, 3)
    idx = build_linear(Text(data), MinimizerParams(q, p))
    mins = brute_minimizers(data, q, p)
    gaps = {data[a - 1 : b - 1] for a, b in zip(mins, mins[1:]) if b - a > 1}
    assert set(idx.store.keys()) == gaps | set(data[i : i + 1] for i in range(len(data)))
    for k, key in enumerate(idx.store.keys()):
        lst = idx.store.list_at(k)
        lo, hi = sa_range_of(idx.text, idx.sa, key)
        assert lst.count_base == lo - 1
        assert lst.positions.tolist() == brute_occ_list(data, key)


@pytest.mark.parametrize("q,p", [(4, 2), (8, 3), (12, 4), (6, 6)])
def test_pattern_minimizers_align_with_text(q, p):
    rng = random.Random(q + 100 * p)
    params = MinimizerParams(q, p)
    for sigma in (2, 4):
        data = random_text(rng, 300, sigma)
        text_mins = brute_minimizers(data, q, p)
        succ = dict(zip(text_mins, text_mins[1:]))
        for _ in range(150):
            m = rng.randint(q, 40)
            s = rng.randint(1, len(data) - m + 1)
            pat = data[s - 1 : s - 1 + m]
            pm = minimizer_positions(pat, params)
            for a, b in zip(pm, pm[1:]):
                assert succ[s + a - 1] == s + b - 1


@pytest.mark.parametrize("q,p", PARAMS)
def test_step_count_formula(q, p):
    rng = random.Random(7 * q + p)
    data = random_text(rng, 500, 4)
    idx = build_linear(Text(data), MinimizerParams(q, p))
    for _ in range(200):
        m = rng.randint(q, 48)
        s = rng.randint(0, len(data) - m)
        pat = data[s : s + m]
        mins = minimizer_positions(pat, idx.params)
        res = idx.count(pat)
        assert res.count >= 1
        assert res.steps == (m - mins[-1] + 1) + (len(mins) - 1) + (mins[0] - 1)
