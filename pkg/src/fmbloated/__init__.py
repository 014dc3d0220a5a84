"""FM-bloated: backward search over q-grams instead of single symbols.

Two index variants share one hash-table store of occurrence lists:

* :func:`build_superlinear` stores the q-grams of power-of-two (or
  Fibonacci) lengths preceding every suffix; a count query takes
  popcount(m) steps for the pow2 scheme.
* :func:`build_linear` stores unigrams plus the q-grams between
  consecutive (q, p)-minimizers; space stays O(n (q - p + 1)) entries.
"""
from .linear import LinearIndex, MinimizerParams, build_linear, count_linear, minimizer_positions
from .search import CountResult
from .serialize import FormatError, deserialize, load, save, serialize
from .store import OccList, QGramKey, QGramStore, StoreConfig, build_qa, occ
from .superlinear import Scheme, SuperlinearIndex, build_superlinear, count_superlinear, decompose_pattern
from .text import (
    InvalidInputError,
    SuffixArray,
    Text,
    build_suffix_array,
    load_text,
    naive_count,
    sa_range_of,
)

__version__ = "0.1.0"

__all__ = [
    "CountResult",
    "FormatError",
    "InvalidInputError",
    "LinearIndex",
    "MinimizerParams",
    "OccList",
    "QGramKey",
    "QGramStore",
    "Scheme",
    "StoreConfig",
    "SuffixArray",
    "SuperlinearIndex",
    "Text",
    "build_linear",
    "build_qa",
    "build_suffix_array",
    "build_superlinear",
    "count_linear",
    "count_superlinear",
    "decompose_pattern",
    "deserialize",
    "load",
    "load_text",
    "minimizer_positions",
    "naive_count",
    "occ",
    "sa_range_of",
    "save",
    "serialize",
]
