"""Resumable exhaustive search for s = 3, n = 13 (roughly ten seconds per run).

The search splits the space of stable traces into deterministic prefixes
and writes each finished prefix to a JSON-lines checkpoint.  Interrupting
the script and running it again resumes from the checkpoint; the answer
does not depend on the number of worker processes.

    python3 demos/05_checkpointed_search.py [checkpoint-path]
"""

import sys
import tempfile
from pathlib import Path

from matchlab import conjectured_max, max_stable

path = Path(sys.argv[1]) if len(sys.argv) > 1 else Path(tempfile.gettempdir()) / "matchlab_s3_n13.jsonl"
print(f"checkpoint: {path}")
res = max_stable(13, 3, 3, allow_large=True, checkpoint=str(path))
print(f"maximum {res.max_size} ({res.matched_construction}); "
      f"the larger construction has {conjectured_max(13, 3, 3)}")

res = max_stable(13, 3, 3, allow_large=True, reduced=True)
print(f"with no singleton traces allowed the maximum drops to {res.max_size} ({res.matched_construction})")
