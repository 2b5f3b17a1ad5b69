"""Pair and triple structure of random maximal stable families (k = 3).

Maximal stable families with matching number 3 are drawn from a fixed
seed, mixing plain random saturation, saturation that forbids singleton
traces, and saturation started from a few triples through the last vertex.  For each family with a single extra vertex in its base
partition, every pair of blocks is classified and every triple is checked
for the fatness / robustness properties and the weight bound.
"""

from collections import Counter
from itertools import combinations

from matchlab import (
    PreconditionError,
    base_partition,
    classify_pair,
    structure_violations,
    trace,
    triple_profile,
)
from matchlab.acceptance import saturated_corpus

cases, kinds, checked = Counter(), Counter(), 0
corpus = saturated_corpus()
for fam in corpus:
    try:
        problems = structure_violations(fam, 3)
    except PreconditionError:
        continue
    checked += 1
    assert not problems, problems
    t, bp = trace(fam, 3, 3), base_partition(fam, 3, 3)
    for u, v in combinations(range(1, 4), 2):
        cases[classify_pair(t, bp, u, v).case.value] += 1
    prof = triple_profile(t, bp, (1, 2, 3))
    kinds["robust" if prof.robust else "fat" if prof.fat else
          "slightly fat" if prof.slightly_fat else "other"] += 1

print(f"{checked} of {len(corpus)} families satisfied the preconditions; no structural violation found")
print("pair cases:", dict(sorted(cases.items())))
print("triple kinds:", dict(sorted(kinds.items())))
