"""The size of a family recovered exactly from weighted restrictions.

A stable family is determined by its trace on the first ks + k - 1
vertices.  Splitting the trace along a base partition into blocks and
weighting each restricted member by a ratio of binomial coefficients gives
a sum over k-sets of blocks that equals the size of the family exactly.
Everything here is computed with fractions, so equality is exact.
"""

from matchlab import (
    ExtremalSpec,
    base_partition,
    build_A,
    counting_lemma_check,
    restriction,
    size_formula,
    trace,
)

N, K, S = 13, 3, 3

for ell in (1, 2, 3):
    fam = build_A(ExtremalSpec(N, K, S, ell))
    t = trace(fam, K, S)
    bp = base_partition(t, K, S)
    rep = counting_lemma_check(fam, K, S)
    print(f"A_{ell}({N}): {len(fam)} members, trace of {len(t)} sets, "
          f"size formula {size_formula(t)}, weighted sum {rep.rhs}, equal: {rep.lhs == rep.rhs}")
    print(f"   base partition: extra vertices {list(bp.D)}, blocks {[list(b) for b in bp.blocks]}")

fam = build_A(ExtremalSpec(N, K, S, 2))
t = trace(fam, K, S)
res = restriction(t, base_partition(t, K, S), (1, 2, 3))
print("\nrestriction of A_2(13) to blocks 1, 2, 3 (first ten members):")
for m in res.members[:10]:
    print(f"   {list(m.H)!s:12} width {m.width}  weight {m.weight}")
print(f"   total weight {res.total_weight()}")
