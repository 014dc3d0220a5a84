"""Count queries on the superlinear index.

Every suffix contributes the q-grams of lengths 1, 2, 4, ... that end right
before it.  A pattern of length m is then matched in popcount(m) backward
steps instead of m.
"""
from fmbloated import Scheme, build_superlinear, decompose_pattern, load_text

text = load_text(b"banana")
index = build_superlinear(text)

trace = []
res = index.count(b"ana", trace)
print(f"'ana' occurs {res.count} times, found in {res.steps} steps")
for (start, size), (sp, ep) in zip(decompose_pattern(3, index.scheme).chunks, trace):
    print(f"  chunk at {start} of length {size}: suffix range [{sp}, {ep}]")

# The Fibonacci scheme trades a few extra keys for a different step profile.
for scheme in (Scheme("pow2"), Scheme("fib", 233)):
    print(scheme.kind, "m=20 ->", decompose_pattern(20, scheme).lengths)
