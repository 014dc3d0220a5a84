"""Shared brute-force oracles.  None of these touch the code under test."""
from collections import Counter
import random

import pytest

ACCEPTANCE_LINES = []


def random_text(rng: random.Random, n: int, sigma: int) -> bytes:
    alphabet = bytes(range(97, 97 + sigma))
    return bytes(rng.choice(alphabet) for _ in range(n))


def brute_sa(data: bytes):
    """1-based suffix starts sorted by explicit sentinel-terminated copies."""
    term = data + b"\x00"
    return sorted(range(1, len(term) + 1), key=lambda i: term[i - 1 :])


def brute_rank(data: bytes):
    sa = brute_sa(data)
    rank = [0] * len(sa)
    for r, i in enumerate(sa, start=1):
        rank[i - 1] = r
    return rank


def substring_counts(data: bytes, max_len: int) -> Counter:
    """Occurrence count of every substring up to ``max_len`` by enumeration."""
    return Counter(data[i : i + m] for m in range(1, max_len + 1) for i in range(len(data) - m + 1))


def brute_minimizers(s: bytes, q: int, p: int):
    out = set()
    for t in range(len(s) - q + 1):
        out.add(min(range(t, t + q - p + 1), key=lambda u: s[u : u + p]) + 1)
    return sorted(out)


def brute_occ_list(data: bytes, x: bytes):
    """Ranks of the suffixes directly following each occurrence of ``x``."""
    rank = brute_rank(data)
    ends = [i + len(x) for i in range(len(data) - len(x) + 1) if data[i : i + len(x)] == x]
    return sorted(rank[e] for e in ends)


def absent_patterns(rng: random.Random, data: bytes, sigma: int, k: int, max_len: int = 32):
    """``k`` random patterns over the text alphabet (plus a foreign byte) that
    do not occur in ``data``."""
    alphabet = bytes(range(97, 97 + sigma)) + b"z"
    out = set()
    tries = 0
    while len(out) < k and tries < 100 * k:
        tries += 1
        m = rng.randint(1, max_len)
        pat = bytes(rng.choice(alphabet) for _ in range(m))
        if pat not in data:
            out.add(pat)
    return sorted(out)


@pytest.fixture
def rng():
    return random.Random(12345)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
