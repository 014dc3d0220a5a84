"""Save an index in the FMB1 format and load it back.

Only the text and the key records are written.  The hash table and the QA
lists are rebuilt on load.
"""
import tempfile
from pathlib import Path

from fmbloated import MinimizerParams, build_linear, build_superlinear, load, save
from fmbloated.corpus import english_like
from fmbloated.text import Text

text = Text(english_like(100_000))
with tempfile.TemporaryDirectory() as tmp:
    for index in (build_superlinear(text), build_linear(text, MinimizerParams(8, 3))):
        path = Path(tmp) / "index.fmb"
        written = save(index, path)
        back = load(path)
        pat = text.payload[5000:5030]
        print(f"{type(index).__name__}: {written / text.n:.1f} bytes/symbol, "
              f"count before {index.count(pat).count}, after {back.count(pat).count}")
