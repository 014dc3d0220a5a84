"""The hash store behind both variants, and the three ways to answer occ.

Lists shorter than the threshold get a linear scan.  Longer ones keep a
small sample (the QA list) that narrows the binary search to one segment.
"""
import numpy as np

from fmbloated import OccList, QGramKey, QGramStore, Text, build_qa
from fmbloated.store import occ_binary, occ_linear, occ_qa

text = Text(b"ab" + b"x" * 100)
store = QGramStore(text)
store.insert(QGramKey(1, 2), OccList(2, np.array([4, 5, 11, 13, 77])))
lst = store.lookup(b"ab")
print("count_base", lst.count_base, "positions", lst.positions.tolist())

positions = list(range(3, 3000, 7))
qa = build_qa(positions, qa_len=16)
print("QA sample indices:", qa.indices[:4], "...")
for pos in (0, 500, 2999):
    print(pos, occ_linear(positions, pos), occ_binary(positions, pos), occ_qa(positions, qa, pos))
