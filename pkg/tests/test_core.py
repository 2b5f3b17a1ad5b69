from itertools import combinations

import pytest
from hypothesis import given, settings, strategies as st

from matchlab.core import (
    Family,
    MatchingWitness,
    VertexSet,
    bits_of,
    dominates,
    down_closure,
    elements_of,
    has_matching,
    is_stable,
    matching_number,
    matching_size,
    vset,
)
from matchlab.constructions import ExtremalSpec, build_A

import oracles


def families(max_n=8, max_edges=12):
    @st.composite
    def build(draw):
        n = draw(st.integers(1, max_n))
        k = draw(st.integers(1, min(3, n)))
        pool = list(combinations(range(1, n + 1), k))
        edges = draw(st.lists(st.sampled_from(pool), max_size=max_edges, unique=True))
        return Family(n, edges, uniform_k=k)
    return build()


# -- value types -------------------------------------------------------------


def test_vertex_set_is_bitmask_backed():
    v = vset(3, 1, 5)
    assert v.bits == 0b101010
    assert v.cardinality() == len(v) == 3
    assert v.to_tuple() == (1, 3, 5)
    assert 3 in v and 2 not in v
    with pytest.raises(AttributeError):
        v.bits = 0


def test_vertices_are_one_based():
    with pytest.raises(ValueError):
        bits_of([0, 1])
    with pytest.raises(ValueError):
        VertexSet.from_bits(1)


def test_family_deduplicates_and_sorts():
    fam = Family(5, [(2, 3), (1, 2), (2, 3), (1,)])
    assert len(fam) == 3
    assert [elements_of(b) for b in fam.masks] == [(1,), (1, 2), (2, 3)]
    assert fam.sizes() == {1: 1, 2: 2}


def test_family_rejects_out_of_range_and_wrong_size():
    with pytest.raises(ValueError):
        Family(3, [(1, 4)])
    with pytest.raises(ValueError):
        Family(5, [(1, 2)], uniform_k=3)


def test_family_views():
    fam = Family(5, [(1, 2), (2, 3), (3, 4)], uniform_k=2)
    assert fam.avoiding(2) == Family(5, [(3, 4)])
    assert fam.containing(2) == Family(5, [(1, 2), (2, 3)])
    assert fam.link(2) == Family(5, [(1,), (3,)])
    assert fam.inside(bits_of((1, 2, 3))) == Family(5, [(1, 2), (2, 3)])


# -- matching number ---------------------------------------------------------


def test_matching_examples():
    assert matching_number(Family(5, [], uniform_k=3))[0] == 0
    assert matching_number(Family(5, [(1, 2, 3)]))[0] == 1
    a2 = build_A(ExtremalSpec(12, 3, 3, 2))
    nu, wit = matching_number(a2)
    assert nu == 3 and len(wit) == 3 and wit.is_in(a2)


def test_witness_is_lexicographically_least():
    fam = Family(6, [(1, 2), (3, 4), (5, 6), (1, 3), (2, 4)], uniform_k=2)
    nu, wit = matching_number(fam)
    assert nu == 3
    assert [e.to_tuple() for e in wit.edges] == [(1, 2), (3, 4), (5, 6)]


def test_witness_rejects_overlap():
    with pytest.raises(ValueError):
        MatchingWitness((vset(1, 2), vset(2, 3)))


def test_has_matching_with_avoided_vertices():
    edges = [bits_of(e) for e in [(1, 2), (3, 4), (1, 3)]]
    assert has_matching(edges, 2)
    assert not has_matching(edges, 2, avoid=bits_of([4]))


@settings(max_examples=300, deadline=None)
@given(families())
def test_matching_number_matches_naive_oracle(fam):
    nu, wit = matching_number(fam)
    assert nu == oracles.nu([elements_of(b) for b in fam.masks])
    assert len(wit) == nu and wit.is_in(fam)
    if fam.uniform_k:
        assert nu <= fam.n // fam.uniform_k


@settings(max_examples=150, deadline=None)
@given(families(), st.data())
def test_matching_number_monotone_and_subadditive(fam, data):
    nu = matching_size(fam.masks)
    k = fam.uniform_k
    extra = data.draw(st.sampled_from(list(combinations(range(1, fam.n + 1), k))))
    bigger = matching_size(list(fam.masks) + [bits_of(extra)])
    assert nu <= bigger <= nu + 1
    split = data.draw(st.integers(0, len(fam)))
    left, right = fam.masks[:split], fam.masks[split:]
    assert nu <= matching_size(left) + matching_size(right)


# -- dominance and stability -------------------------------------------------


def test_dominates_examples():
    assert dominates(vset(1, 3), vset(2, 4))
    assert not dominates(vset(1, 4), vset(2, 3))
    assert dominates(vset(2, 5, 7), vset(2, 5, 7))
    with pytest.raises(ValueError, match="incomparable cardinalities"):
        dominates(vset(1), vset(1, 2))


@pytest.mark.parametrize("size", [2, 3])
def test_dominance_is_a_partial_order(size):
    sets = [VertexSet(c) for c in combinations(range(1, 9), size)]
    for g in sets:
        assert dominates(g, g)
        for f in sets:
            d = dominates(g, f)
            assert d == oracles.dominated(g, f)
            if d and dominates(f, g):
                assert g == f
    # transitivity over a sample of triples
    for g in sets[::3]:
        for f in sets[::2]:
            if dominates(g, f):
                for h in sets[::5]:
                    if dominates(f, h):
                        assert dominates(g, h)


def test_stability_examples():
    assert is_stable(build_A(ExtremalSpec(9, 3, 2, 1)))[0]
    ok, pair = is_stable(Family(3, [(2, 3)]))
    assert not ok and pair == (vset(1, 3), vset(2, 3))
    assert is_stable(Family(6, combinations(range(1, 7), 3)))[0]


@settings(max_examples=150, deadline=None)
@given(families(max_n=6, max_edges=8))
def test_stability_matches_oracle(fam):
    members = [elements_of(b) for b in fam.masks]
    assert is_stable(fam)[0] == oracles.stable(fam.n, members)


@settings(max_examples=100, deadline=None)
@given(families(max_n=7, max_edges=5))
def test_down_closure_is_stable(fam):
    closed = Family(fam.n, down_closure(fam.masks))
    assert is_stable(closed)[0]
    assert set(fam.masks) <= set(closed.masks)
