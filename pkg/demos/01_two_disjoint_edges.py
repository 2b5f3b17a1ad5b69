"""Largest 3-uniform families with no three pairwise disjoint members.

Two natural candidates compete: every triple that meets {1, 2} (the cover)
and every triple inside [8] (the clique).  The clique wins while the ground
set is small; the cover wins once n is large enough.  An exhaustive search
over stable families confirms which one is optimal at n = 9 and n = 10.
"""

from matchlab import ExtremalSpec, build_A, clique_size, cover_size, matching_number, max_stable, pivotal

K, S = 3, 2

print(f"clique on {K * S + K - 1} vertices: {clique_size(K, S)} members")
for n in range(8, 12):
    print(f"n = {n:2d}: cover has {cover_size(n, K, S)} members")
print(f"the cover first catches up at n = {pivotal(S, K)}\n")

for n in (9, 10):
    res = max_stable(n, K, S, threads=1)
    print(f"n = {n}: exhaustive maximum {res.max_size}, attained by {res.matched_construction} "
          f"({res.nodes_explored} search nodes)")

cover = build_A(ExtremalSpec(10, K, S, 1))
nu, witness = matching_number(cover)
print(f"\nthe cover at n = 10 has matching number {nu}, e.g. {[list(e) for e in witness.edges]}")
