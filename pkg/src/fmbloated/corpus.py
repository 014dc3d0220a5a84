"""Deterministic English-like text for desk-scale benchmarks.

Word frequencies follow a Zipf law over a vocabulary made of real function
words followed by pronounceable synthetic words; sentences get capitals,
commas and full stops, and paragraphs end with a newline.
"""
from __future__ import annotations

from pathlib import Path
from typing import Union

import numpy as np

_COMMON = (
    "the of and to a in is that it was for on are as with his they at be this "
    "from have or by one had not but what all were when we there can an your "
    "which their said if do will each about how up out them then she many some "
    "so these would other into has more her two like him see time could no make "
    "than first been its who now people my made over did down only way find use "
    "may water long little very after words called just where most know get "
    "through back much before go good new write our used me man too any day same "
    "right look think also around another came come work three word must because "
    "does part even place well such here take why things help put years different "
    "away again off went old number great tell men say small every found still "
    "between name should home big give air line set own under read last never us "
    "left end along while might next sound below saw something thought both few "
    "those always looked show large often together asked house world going want"
).split()

_ONSETS = "b c d f g h j k l m n p r s t v w y br cr dr fr gr pr tr bl cl fl gl pl sl st sp sh ch th wh".split()
_VOWELS = "a e i o u ea ee ai oa ou io".split()
_CODAS = ["", "", "", "n", "r", "s", "t", "l", "nd", "st", "ng", "ck", "rt", "nt", "ss"]


def _synthetic_words(count: int, rng: np.random.Generator) -> list:
    words, seen = [], set(_COMMON)
    while len(words) < count:
        syllables = int(rng.choice([1, 1, 2, 2, 2, 3]))
        w = "".join(
            _ONSETS[rng.integers(len(_ONSETS))] + _VOWELS[rng.integers(len(_VOWELS))] + _CODAS[rng.integers(len(_CODAS))]
            for _ in range(syllables)
        )
        if w not in seen:
            seen.add(w)
            words.append(w)
    return words


def english_like(size: int, seed: int = 2016, vocabulary: int = 30000, zipf_s: float = 1.05) -> bytes:
    """Exactly ``size`` bytes of English-like ASCII text."""
    rng = np.random.default_rng(seed)
    vocab = list(_COMMON) + _synthetic_words(vocabulary - len(_COMMON), rng)
    weights = 1.0 / np.arange(1, len(vocab) + 1) ** zipf_s
    weights /= weights.sum()
    lengths = np.array([len(w) + 1 for w in vocab])
    mean_len = float(weights @ lengths)
    out = []
    produced = 0
    while produced < size:
        n_words = int((size - produced) / mean_len * 1.05) + 64
        ids = rng.choice(len(vocab), size=n_words, p=weights)
        sentence_len = rng.integers(6, 22, size=n_words // 6 + 2)
        bounds = set(np.cumsum(sentence_len).tolist())
        commas = rng.random(n_words) < 0.07
        paragraph = rng.random(n_words) < 0.12
        piece = []
        cap = True
        for j, wid in enumerate(ids.tolist()):
            w = vocab[wid]
            if cap:
                w = w.capitalize()
                cap = False
            if j + 1 in bounds:
                piece.append(w + (".\n" if paragraph[j] else ". "))
                cap = True
            elif commas[j]:
                piece.append(w + ", ")
            else:
                piece.append(w + " ")
        chunk = "".join(piece).encode("ascii")
        out.append(chunk)
        produced += len(chunk)
    return b"".join(out)[:size]


def write_corpus(path: Union[str, Path], size: int, seed: int = 2016) -> Path:
    path = Path(path)
    path.write_bytes(english_like(size, seed))
    return path
