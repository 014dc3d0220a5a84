"""Query time per character drops sharply at power-of-two pattern lengths.

A pattern of length 64 needs one backward step on a pow2 index.  One of
length 63 needs six.
"""
import sys

from fmbloated import Scheme, build_superlinear
from fmbloated.bench import BenchConfig, run_bench, write_csv
from fmbloated.corpus import english_like
from fmbloated.text import Text

size = int(sys.argv[1]) if len(sys.argv) > 1 else 1_000_000
index = build_superlinear(Text(english_like(size)), Scheme("pow2", 64))
rows = run_bench(index, BenchConfig(range(56, 66), queries_per_length=2000))
write_csv(rows, sys.stdout)
