"""The linear-space index: unigrams plus the q-grams between minimizers.

Only O(n) keys are stored.  A pattern is matched char by char outside its
first and last minimizer and one gap q-gram at a time in between.
"""
from fmbloated import MinimizerParams, build_linear, load_text, minimizer_positions
from fmbloated.bench import index_stats

params = MinimizerParams(q=4, p=2)
text = load_text(b"mississippi")
print("text minimizers:", minimizer_positions(text.payload, params))

index = build_linear(text, params)
print("keys:", sorted(index.store.keys()))

res = index.count(b"ssis")
print(f"'ssis': count {res.count} in {res.steps} steps")

st = index_stats(index)
print(f"gap keys {st.gap_keys}, average minimizer gap {st.avg_minimizer_gap}")
