import csv
import io
import json
from fractions import Fraction as F
from math import comb

import pytest
from hypothesis import given, strategies as st

from matchlab.audit import (
    InequalityRecord,
    audit_catalog,
    check_dominance,
    check_fort,
    check_pivotal_bounds,
    dominance_records,
    exact_loss,
    floor_loss,
    fort_ratio_records,
    mismatches,
    monotone_violations,
    pivotal_below_kplus1_s,
    pivotal_bound_records,
    reported_values,
    to_csv,
    to_json,
    unfloored_loss,
)
from matchlab.constructions import ExtremalSpec, pivotal, size_A


@pytest.fixture(scope="module")
def catalogs():
    return {mode: audit_catalog(range(3, 120), mode) for mode in ("n0", "n0_minus_1")}


def find(recs, id_, s, extra=()):
    (r,) = [r for r in recs if r.id == id_ and r.s == s and r.extra == extra]
    return r


# -- record semantics ------------------------------------------------------------


def test_record_margin_and_flags():
    r = InequalityRecord("x", ("here", "why"), 3, 13, F(9), F(10))
    assert r.margin == 1 and r.holds and r.satisfied and r.as_expected
    eq = InequalityRecord("x", ("", ""), 3, 13, F(5), F(5), strict=True)
    assert eq.holds and not eq.satisfied and not eq.as_expected
    tight = InequalityRecord("x", ("", ""), 3, 13, F(4), F(5), tight=True)
    assert tight.holds and not tight.as_expected
    fail = InequalityRecord("x", ("", ""), 3, 13, F(15), F(10), expected=False)
    assert not fail.holds and fail.as_expected


# -- dominance, fort, pivotal bounds --------------------------------------------------


def test_dominance_examples():
    assert check_dominance(3, 3, 13)
    assert size_A(ExtremalSpec(13, 3, 3, 2)) <= 166
    assert check_dominance(3, 2, 10)
    rec = {dict(r.extra)["ell"]: r for r in dominance_records(3, 2, 10)}
    assert rec[2].lhs == 60 and rec[2].rhs == 64
    assert rec[1].lhs == 64 and rec[3].lhs == 56
    with pytest.raises(ValueError):
        check_dominance(3, 3, 10)


def test_dominance_over_a_wider_grid():
    for k in (2, 3, 4):
        for s in range(1, 15):
            for n in range(k * s + k - 1, (k + 1) * (s + 1)):
                assert check_dominance(k, s, n)


@pytest.mark.parametrize("n,k,s", [(10, 3, 2), (13, 3, 3), (17, 3, 4), (12, 3, 3)])
def test_fort_examples(n, k, s):
    r = check_fort(n, k, s)
    assert r.holds and r.margin >= 0


def test_fort_ratio_argument():
    recs = fort_ratio_records(3, 3)
    assert all(r.satisfied for r in recs)
    n = 12
    assert comb(n - 1, 3) - comb(8, 3) > comb(8, 3)


def test_fort_over_grid():
    for k in (2, 3, 4):
        for s in range(1, 12):
            for n in range(k * s + k - 1, (k + 2) * (s + 1)):
                assert check_fort(n, k, s).holds


def test_pivotal_bounds():
    assert check_pivotal_bounds(200, 3)
    for k in range(2, 6):
        assert check_pivotal_bounds(100, k)
    recs = {(r.id, r.s): r for r in pivotal_bound_records(4, 3)}
    assert (recs["pivotal.cap", 3].lhs, recs["pivotal.cap", 3].rhs) == (13, 16)
    assert (recs["pivotal.half", 3].lhs, recs["pivotal.half", 3].rhs) == (13, 13)
    assert (recs["pivotal.cap", 4].lhs, recs["pivotal.cap", 4].rhs) == (17, 20)
    assert (recs["pivotal.half", 4].lhs, recs["pivotal.half", 4].rhs) == (17, 17)
    with pytest.raises(ValueError):
        check_pivotal_bounds(10, 6)


def test_sharper_pivotal_bound_fails_for_small_s():
    bad = [s for s in range(1, 201) if not pivotal_below_kplus1_s(s, 3).satisfied]
    assert bad == [1, 2, 3, 4, 5, 6]


# -- the catalogue ------------------------------------------------------------------------


def test_every_entry_matches_its_expected_outcome(catalogs):
    for recs in catalogs.values():
        assert mismatches(recs) == []
        assert monotone_violations(recs) == []


def test_named_entries(catalogs):
    n0 = catalogs["n0"]
    # equality at s = 4 for four cross pairs
    r = find(n0, "q2.g2-4.unfloored", 4)
    assert r.lhs == r.rhs == 12
    # direct check at s = 3: nine width-one pairs
    r = find(n0, "q3.floor", 3)
    assert (r.lhs, r.rhs) == (9, 10)
    # the designed failure, as printed and with exact weights
    lit = find(n0, "q2.small-g2.s3.literal", 3)
    assert (lit.lhs, lit.rhs) == (15, 10) and not lit.holds
    ex = find(n0, "q2.small-g2.s3.exact", 3)
    assert (ex.lhs, ex.rhs) == (13, 10) and not ex.holds
    # strict at s = 5 for three cross pairs
    r = find(n0, "q2.g2-3.unfloored", 5)
    assert r.margin > 0 and (r.lhs, r.rhs) == (F(29, 4), F(23, 3))
    # three cross pairs at s = 4 miss by one; the construction gap covers it
    assert find(n0, "q2.g2-3.s4.excess", 4).lhs == 1
    assert find(n0, "q2.g2-3.s4.slack", 4).holds
    # gains at s = 4 are 11
    assert find(n0, "q1.s4.rhs-value", 4).lhs == 11
    r = find(n0, "q1.floor.g2-5", 4)
    assert (r.lhs, r.rhs) == (F(27, 2), 11) and not r.holds
    # the s = 5 not-sufficiently-fat table: tight at eight cross pairs, fails at nine
    assert find(n0, "nsf.floor", 5, (("g2", 8),)).margin == 0
    assert not find(n0, "nsf.floor", 5, (("g2", 9),)).holds


def test_below_pivot_entries(catalogs):
    m1 = catalogs["n0_minus_1"]
    r = find(m1, "q2.small-g2.below-pivot", 3)
    assert (r.n, r.lhs, r.rhs) == (12, 2, 10)
    r = find(m1, "q2.small-g2.below-pivot", 4)
    assert (r.n, r.lhs, r.rhs) == (16, 5, 7)
    r = find(m1, "nsf.s4.below-pivot.literal", 4, (("g2", 9),))
    assert r.lhs == r.rhs == F(21, 2)
    r = find(m1, "nsf.s4.below-pivot.exact", 4, (("g2", 9),))
    assert (r.lhs, r.rhs) == (12, 13)


def test_hand_evaluations(catalogs):
    # recomputed with explicit common denominators
    n0 = catalogs["n0"]
    for s in (4, 7, 30):
        r = find(n0, "no-1a3.g2-le-2", s)
        assert r.lhs == F(4 * (s - 1) + 6, (s - 1) * (s - 2))
    for s in (6, 11, 50):
        r = find(n0, "q2.small-g2.relaxed", s)
        assert r.lhs == F(7 * (s - 1) + 9, (s - 1) * (s - 2))


def test_relaxation_ordering():
    for s in range(3, 200):
        for g2 in range(10):
            assert floor_loss(g2, 9, s) <= unfloored_loss(g2, 9, s)
        for n in (pivotal(s, 3), pivotal(s, 3) - 1):
            assert exact_loss(2, 9, n, s) <= floor_loss(2, 9, s)


@given(st.integers(3, 10_000))
def test_loss_weights_at_the_pivot(s):
    n = pivotal(s, 3)
    assert n - 3 * s - 2 <= (s + 2) // 2
    assert n - 3 * s - 3 <= s // 2


def test_catalog_is_sorted_and_deterministic():
    a = audit_catalog(range(3, 30), "n0")
    b = audit_catalog(reversed(range(3, 30)), "n0")
    assert a == b
    keys = [(r.id, r.s, r.extra) for r in a]
    assert keys == sorted(keys)


def test_catalog_arguments():
    with pytest.raises(ValueError):
        audit_catalog([2], "n0")
    with pytest.raises(ValueError):
        audit_catalog([10_001], "n0")
    with pytest.raises(ValueError):
        audit_catalog([3], "n1")
    assert len(audit_catalog([10_000], "n0")) > 0


def test_monotone_check_detects_a_drop():
    def rec(s, margin):
        return InequalityRecord("m", ("", ""), s, None, F(0), F(margin), monotone=True)
    assert monotone_violations([rec(3, 1), rec(4, 2)]) == []
    assert monotone_violations([rec(3, 2), rec(4, 1)]) == [("m", (), 3)]


def test_reported_values():
    assert all(r.as_expected for r in reported_values())


def test_reports():
    recs = audit_catalog([3, 4], "n0")
    rows = list(csv.DictReader(io.StringIO(to_csv(recs))))
    assert len(rows) == len(recs)
    assert {"id", "anchor", "s", "n", "lhs", "rhs", "holds"} <= set(rows[0])
    data = json.loads(to_json(recs))
    assert data[0]["lhs"].count("/") == 1
    assert to_csv(recs) == to_csv(audit_catalog([4, 3], "n0"))
