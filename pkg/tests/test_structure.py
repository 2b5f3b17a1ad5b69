import random
from dataclasses import replace
from fractions import Fraction
from itertools import combinations

import pytest

from matchlab.constructions import ExtremalSpec, build_A
from matchlab.core import Family, VertexSet, mask_dominates, vset
from matchlab.search import random_stable_saturation
from matchlab.structure import (
    PairCase,
    check_structure_hypotheses,
    classify_pair,
    diagonals,
    dominated_transversal_count,
    is_normal,
    missing_counts,
    pair_violations,
    q_set,
    structure_violations,
    transversals,
    transversals_above,
    triple_profile,
    triple_violations,
)
from matchlab.traces import BasePartition, PreconditionError, base_partition, f_value, restriction, trace


def parts(fam, s=3):
    return trace(fam, 3, s), base_partition(fam, 3, s)


def A(n, s, ell):
    return build_A(ExtremalSpec(n, 3, s, ell))


# -- pairs ----------------------------------------------------------------------


def test_A2_pairs_are_case_one():
    t, bp = parts(A(13, 3, 2))
    for u, v in combinations(range(1, 4), 2):
        prof = classify_pair(t, bp, u, v)
        assert prof.case is PairCase.CASE_I and prof.g == 4
        assert pair_violations(t, bp, prof) == []


def test_cover_family_pairs_fail_d1():
    # the blocks are (1,6,9), (2,7,10), (3,8,11): 2-sets such as {1,7} have width 2
    t, bp = parts(A(13, 3, 1))
    res = restriction(t, bp, (1, 2), weights=False)
    cross = {m.H for m in res.members if len(m.H) == 2 and m.width == 2}
    assert vset(1, 7) in cross and vset(1, 2) in cross
    with pytest.raises(PreconditionError) as exc:
        classify_pair(t, bp, 1, 2)
    assert exc.value.reason == "d1"


def test_clique_pairs_have_no_two_sets():
    t, bp = parts(A(13, 3, 3))
    assert classify_pair(t, bp, 1, 3).case is PairCase.SMALL


def test_pair_needs_two_blocks():
    t, bp = parts(A(13, 3, 2))
    with pytest.raises(ValueError):
        classify_pair(t, bp, 2, 2)


# -- transversals and diagonals ------------------------------------------------


def test_transversal_counts_k3():
    t, bp = parts(A(13, 3, 2))
    R = (1, 2, 3)
    assert len(transversals(bp, R)) == 27
    diags = diagonals(bp, R)
    assert len(diags) == 6
    for D in diags:
        above = transversals_above(bp, R, D)
        assert len(above) == 6
        assert all(mask_dominates(D.bits, T.bits) for T in above)
        assert dominated_transversal_count(bp, R, D) >= 6


def test_transversal_counts_k4():
    blocks = tuple(vset(*range(4 + 4 * i, 8 + 4 * i)) for i in range(4))
    bp = BasePartition(vset(1, 2, 3), blocks, 4)
    R = (1, 2, 3, 4)
    assert len(transversals(bp, R)) == 4 ** 4
    diags = diagonals(bp, R)
    assert len(diags) == 24
    assert all(len(transversals_above(bp, R, D)) == 24 for D in diags)
    # consecutive blocks: every diagonal also dominates only what the blockwise rule says
    assert is_normal(bp, R) is False


def test_diagonals_need_k_blocks():
    _, bp = parts(A(13, 3, 2))
    with pytest.raises(ValueError):
        diagonals(bp, (1, 2))


def test_normal_matches_definition():
    _, bp = parts(A(13, 3, 2))
    cols = bp.columns((1, 2, 3))
    want = max(cols[0]) < min(cols[1]) and max(cols[1]) < min(cols[2])
    assert is_normal(bp, (1, 2, 3)) == want


# -- triples -----------------------------------------------------------------------


def test_A2_triple_profile():
    t, bp = parts(A(13, 3, 2))
    prof = triple_profile(t, bp, (1, 2, 3))
    assert (prof.g1, prof.g2) == (9, 12)
    assert prof.robust and not prof.fat
    assert prof.total_weight == 161 == f_value(2, 13, 3, 3)
    assert sum(prof.pair_g.values()) == prof.g2
    assert triple_violations(t, bp, prof) == []


def test_cover_family_triple():
    t, bp = parts(A(13, 3, 1))
    prof = triple_profile(t, bp, (1, 2, 3))
    assert not prof.fat and prof.Q == ()
    # three disjoint 2-sets such as {1,9}, {2,10}, {3,11} make it robust; without
    # d_1 = 1 the weight bound for robust triples does not apply
    assert prof.robust
    assert (vset(1, 9), vset(2, 10), vset(3, 11)) in prof.robust_witnesses
    assert prof.total_weight == 166 > f_value(2, 13, 3, 3)
    counts = missing_counts(t, bp, (1, 2, 3))
    assert counts.missing_w3_in_BC >= 4 and counts.missing_w2_in_BC >= 6


def test_clique_triple():
    t, bp = parts(A(13, 3, 3))
    prof = triple_profile(t, bp, (1, 2, 3))
    assert prof.fat and prof.sufficiently_fat
    counts = missing_counts(t, bp, (1, 2, 3))
    assert counts.missing_w3_in_BC == counts.missing_w2_in_BC == 0
    assert counts.transversals_missing == 0 and counts.missing_w2_triples == 0
    assert q_set(t, bp, (1, 2, 3)) == (1, 2, 3)


def test_detector_reports_fabricated_violations():
    t, bp = parts(A(13, 3, 2))
    prof = triple_profile(t, bp, (1, 2, 3))
    fake = replace(prof, robust=False, g2=10, robust_witnesses=())
    msgs = triple_violations(t, bp, fake)
    assert any("not robust but g2 = 10" in m for m in msgs)
    assert any("not the sum over pairs" in m for m in msgs)
    heavy = replace(prof, total_weight=Fraction(10 ** 6))
    assert any("robust but weight" in m for m in triple_violations(t, bp, heavy))


def test_structure_hypotheses():
    with pytest.raises(PreconditionError) as exc:
        check_structure_hypotheses(A(13, 3, 1), 3)
    assert exc.value.reason == "d1"
    with pytest.raises(PreconditionError) as exc:
        check_structure_hypotheses(Family(13, [(2, 3, 4)], uniform_k=3), 3)
    assert exc.value.reason == "unstable"


def test_random_families_satisfy_structure_claims():
    rng = random.Random(5)
    checked = 0
    for n in (12, 13, 12, 13, 12, 13):
        fam = random_stable_saturation(n, 3, 3, rng)
        if base_partition(fam, 3, 3).d[0] != 1:
            continue
        assert structure_violations(fam, 3) == []
        checked += 1
    assert checked >= 1
