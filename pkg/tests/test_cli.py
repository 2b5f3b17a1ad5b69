import json
import os
import subprocess
import sys

import pytest

from matchlab.cli import main
from matchlab.constructions import ExtremalSpec, build_A
from matchlab.hyp import format_hyp

FANO_LIKE = "# three disjoint triples and one more\n7\n1 2 3\n4 5 6\n1 4 7\n"


@pytest.fixture
def hyp(tmp_path):
    def write(text, name="f.hyp"):
        p = tmp_path / name
        p.write_text(text)
        return str(p)
    return write


@pytest.fixture
def a1_13(hyp):
    return hyp(format_hyp(build_A(ExtremalSpec(13, 3, 3, 1))), "a1.hyp")


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_nu_text_and_json(capsys, hyp):
    path = hyp(FANO_LIKE)
    code, out, _ = run(capsys, "nu", path)
    assert code == 0 and out.strip() == "2"
    code, out, _ = run(capsys, "nu", path, "--format", "json")
    data = json.loads(out)
    assert data["nu"] == 2 and len(data["witness"]) == 2


def test_stable_exit_codes(capsys, hyp, a1_13):
    code, out, _ = run(capsys, "stable", a1_13)
    assert code == 0 and json.loads(out) == {"stable": True}
    code, out, _ = run(capsys, "stable", hyp("4\n2 3\n"))
    assert code == 1 and json.loads(out)["stable"] is False


def test_stabilize_round_trip(capsys, hyp, tmp_path):
    code, out, _ = run(capsys, "stabilize", hyp("5\n3 5\n2 4\n"))
    assert code == 0
    again = tmp_path / "out.hyp"
    again.write_text(out)
    assert run(capsys, "stable", str(again))[0] == 0


def test_build_a(capsys):
    code, out, _ = run(capsys, "build-a", "--n", "10", "--k", "3", "--s", "2", "--ell", "2",
                       "--format", "json")
    assert code == 0 and json.loads(out)["size"] == 60
    code, _, err = run(capsys, "build-a", "--n", "4", "--k", "3", "--s", "2", "--ell", "2")
    assert code == 2 and "out of range" in err


def test_trace_partition_restrict(capsys, a1_13):
    code, out, _ = run(capsys, "trace", a1_13, "--s", "3")
    data = json.loads(out)
    assert code == 0 and data["core"] == 11 and data["size_formula"] == 166
    code, out, _ = run(capsys, "partition", a1_13, "--s", "3")
    data = json.loads(out)
    assert code == 0 and data["D"] == [4, 5] and len(data["blocks"]) == 3
    code, out, _ = run(capsys, "restrict", a1_13, "--s", "3", "--R", "1,2,3")
    data = json.loads(out)
    assert code == 0 and data["total_weight"] == "166/1"
    code, out, _ = run(capsys, "restrict", a1_13, "--s", "3", "--R", "1,2,3", "--format", "csv")
    assert out.splitlines()[0] == "set,weight,width"
    assert run(capsys, "restrict", a1_13, "--s", "3", "--R", "a,b")[0] == 2


def test_counting_lemma(capsys, a1_13):
    code, out, _ = run(capsys, "counting-lemma", a1_13, "--s", "3")
    data = json.loads(out)
    assert code == 0 and data["holds"] is True and data["lhs"] == 166
    assert {"rhs_num", "rhs_den"} <= set(data)


def test_profile(capsys, hyp, a1_13):
    a2 = hyp(format_hyp(build_A(ExtremalSpec(13, 3, 3, 2))), "a2.hyp")
    code, out, _ = run(capsys, "profile", a2, "--s", "3", "--R", "1,2,3")
    data = json.loads(out)
    assert code == 0 and len(data["pairs"]) == 3 and len(data["triples"]) == 1
    assert run(capsys, "profile", a2, "--s", "3", "--k", "4")[0] == 2
    # the cover construction fails the d_1 = 1 precondition
    code, _, err = run(capsys, "profile", a1_13, "--s", "3")
    assert code == 2 and "d1" in err


def test_search_and_size_guard(capsys):
    code, out, _ = run(capsys, "search", "--n", "10", "--k", "3", "--s", "2", "--threads", "1")
    data = json.loads(out)
    assert code == 0 and data["max_size"] == 64 and data["matched"] == "A_1"
    code, _, err = run(capsys, "search", "--n", "13", "--k", "3", "--s", "3")
    assert code == 2


def test_saturate(capsys, hyp):
    code, out, _ = run(capsys, "saturate", "--n", "7", "--k", "2", "--s", "2", "--format", "json")
    data = json.loads(out)
    assert code == 0 and data["size"] == 11  # C(7,2) - C(5,2)
    assert run(capsys, "saturate", "--k", "2", "--s", "2")[0] == 2


def test_audit(capsys):
    code, out, _ = run(capsys, "audit", "--s-min", "3", "--s-max", "6")
    assert code == 0 and out.startswith("id,")
    code, out, _ = run(capsys, "audit", "--s-min", "3", "--s-max", "4", "--format", "json",
                       "--mode", "n0_minus_1")
    assert code == 0 and all(r["n"] is None or isinstance(r["n"], int) for r in json.loads(out))
    assert run(capsys, "audit", "--s-min", "2", "--s-max", "4")[0] == 2
    assert run(capsys, "audit", "--s-min", "5", "--s-max", "4")[0] == 2


def test_pivotal(capsys):
    assert run(capsys, "pivotal", "--s", "3", "--k", "3")[1].strip() == "13"
    assert run(capsys, "pivotal", "--s", "4")[1].strip() == "17"
    assert run(capsys, "pivotal", "--s", "0")[0] == 2


def test_usage_errors(capsys, tmp_path):
    with pytest.raises(SystemExit) as exc:
        main(["frobnicate"])
    assert exc.value.code == 2
    assert run(capsys)[0] == 2
    assert run(capsys, "nu", str(tmp_path / "missing.hyp"))[0] == 2
    bad = tmp_path / "bad.hyp"
    bad.write_text("5\n3 2\n")
    assert run(capsys, "nu", str(bad))[0] == 2
    assert run(capsys, "pivotal", "--s", "3", "--threads", "0")[0] == 2


def test_output_independent_of_thread_count():
    outs = []
    for threads in ("1", "2"):
        env = dict(os.environ, MATCHLAB_THREADS=threads)
        proc = subprocess.run(
            [sys.executable, "-m", "matchlab", "search", "--n", "10", "--k", "3", "--s", "2"],
            capture_output=True, env=env, check=True,
        )
        outs.append(proc.stdout)
    assert outs[0] == outs[1]
