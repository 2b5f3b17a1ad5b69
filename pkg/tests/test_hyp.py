from hypothesis import given, strategies as st

import pytest

from matchlab.core import Family
from matchlab.hyp import format_hyp, load_hyp, parse_hyp, save_hyp


def test_parse_skips_comments_and_blank_lines():
    fam = parse_hyp("# a comment\n5\n\n1 2 3\n# more\n2 3 4\n")
    assert fam.n == 5 and len(fam) == 2 and fam.uniform_k == 3


def test_canonical_round_trip():
    text = "6\n1 2\n1 3\n4 5 6\n"
    assert format_hyp(parse_hyp(text)) == text


@pytest.mark.parametrize("bad", ["", "x\n", "4\n1 1\n", "4\n2 1\n", "4\n1 a\n", "3\n1 4\n"])
def test_parse_errors(bad):
    with pytest.raises(ValueError):
        parse_hyp(bad)


@given(st.integers(1, 8).flatmap(lambda n: st.tuples(
    st.just(n), st.lists(st.frozensets(st.integers(1, n), min_size=1), max_size=10))))
def test_round_trip_property(data):
    n, members = data
    fam = Family(n, [sorted(m) for m in members])
    assert parse_hyp(format_hyp(fam)) == fam
    assert format_hyp(parse_hyp(format_hyp(fam))) == format_hyp(fam)


def test_file_round_trip(tmp_path):
    fam = Family(4, [(1, 2), (3, 4)], uniform_k=2)
    path = tmp_path / "f.hyp"
    save_hyp(fam, path)
    assert load_hyp(path) == fam
