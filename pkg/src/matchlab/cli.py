"""Command-line entry point: ``matchlab <subcommand> ...``.

Exit codes: 0 success, 1 a checked property failed, 2 usage or
parameter error.  Rationals are printed as ``"p/q"`` strings in JSON.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from fractions import Fraction
from itertools import combinations
from typing import Optional, Sequence

from . import audit as audit_mod
from .constructions import ExtremalSpec, build_A, pivotal
from .core import Family, elements_of, is_stable, matching_number
from .hyp import format_hyp, load_hyp
from .search import max_stable, saturate
from .shifting import stabilize
from .structure import classify_pair, missing_counts, triple_profile
from .traces import (
    PreconditionError,
    base_partition,
    counting_lemma_check,
    restriction,
    size_formula,
    trace,
)

OK, CHECK_FAILED, USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def _jsonable(x):
    if isinstance(x, Fraction):
        return f"{x.numerator}/{x.denominator}"
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    return x


def _family_rows(fam: Family) -> list[list[int]]:
    return [list(elements_of(b)) for b in fam.masks]


def _emit(payload, fmt: str, text: Optional[str] = None, out=None) -> None:
    out = out or sys.stdout
    if fmt == "json":
        out.write(json.dumps(_jsonable(payload), indent=2, sort_keys=True) + "\n")
    elif fmt == "csv":
        rows = payload if isinstance(payload, list) else [payload]
        rows = [_jsonable(r) for r in rows]
        keys = sorted({k for r in rows for k in r})
        buf = io.StringIO()
        w = csv.DictWriter(buf, fieldnames=keys, lineterminator="\n")
        w.writeheader()
        for r in rows:
            w.writerow({k: json.dumps(v) if isinstance(v, (list, dict)) else v for k, v in r.items()})
        out.write(buf.getvalue())
    else:
        out.write((text if text is not None else json.dumps(_jsonable(payload))) + "\n")


def _parse_R(text: str) -> tuple[int, ...]:
    try:
        return tuple(sorted(int(x) for x in text.split(",") if x.strip()))
    except ValueError:
        raise UsageError(f"bad index list {text!r}; use e.g. 1,2,3")


def _load(args) -> Family:
    try:
        return load_hyp(args.file)
    except OSError as exc:
        raise UsageError(str(exc))


# --------------------------------------------------------------------------
# subcommands
# --------------------------------------------------------------------------


def cmd_nu(args) -> int:
    fam = _load(args)
    nu, wit = matching_number(fam)
    _emit({"nu": nu, "witness": [list(v) for v in wit.edges]}, args.format or "text", str(nu))
    return OK


def cmd_stable(args) -> int:
    fam = _load(args)
    ok, pair = is_stable(fam)
    payload = {"stable": ok}
    if pair is not None:
        payload["missing"] = list(pair[0])
        payload["present"] = list(pair[1])
    text = "stable" if ok else f"not stable: {pair[0]} missing below {pair[1]}"
    _emit(payload, args.format or "json", text)
    return OK if ok else CHECK_FAILED


def cmd_stabilize(args) -> int:
    fam = _load(args)
    out, log = stabilize(fam)
    payload = {"n": out.n, "members": _family_rows(out), "shifts": [list(s) for s in log.steps]}
    _emit(payload, args.format or "text", format_hyp(out).rstrip("\n"))
    return OK


def cmd_build_a(args) -> int:
    fam = build_A(ExtremalSpec(args.n, args.k, args.s, args.ell))
    payload = {"n": fam.n, "size": len(fam), "members": _family_rows(fam)}
    _emit(payload, args.format or "text", format_hyp(fam).rstrip("\n"))
    return OK


def cmd_trace(args) -> int:
    fam = _load(args)
    t = trace(fam, args.k, args.s)
    payload = {
        "n": t.n, "k": t.k, "s": t.s, "core": t.m,
        "members": [list(elements_of(b)) for b in t.masks],
        "size_formula": size_formula(t),
    }
    _emit(payload, args.format or "json")
    return OK


def cmd_partition(args) -> int:
    fam = _load(args)
    bp = base_partition(fam, args.k, args.s)
    payload = {"D": list(bp.D), "blocks": [list(b) for b in bp.blocks]}
    _emit(payload, args.format or "json")
    return OK


def cmd_restrict(args) -> int:
    fam = _load(args)
    t = trace(fam, args.k, args.s)
    bp = base_partition(t, args.k, args.s)
    res = restriction(t, bp, _parse_R(args.R))
    rows = [{"set": list(m.H), "width": m.width, "weight": m.weight} for m in res.members]
    if (args.format or "json") == "csv":
        _emit(rows, "csv")
    else:
        _emit({"R": list(res.R), "X": list(res.X), "members": rows,
               "total_weight": res.total_weight()}, args.format or "json")
    return OK


def cmd_counting_lemma(args) -> int:
    fam = _load(args)
    rep = counting_lemma_check(fam, args.k, args.s, args.n)
    _emit(rep.to_json(), args.format or "json")
    return OK if rep.equal else CHECK_FAILED


def cmd_profile(args) -> int:
    fam = _load(args)
    if args.k != 3:
        raise UsageError("profile is defined for k = 3")
    t = trace(fam, 3, args.s)
    bp = base_partition(t, 3, args.s)
    pairs = []
    for u, v in combinations(range(1, args.s + 1), 2):
        p = classify_pair(t, bp, u, v)
        pairs.append({"pair": list(p.pair), "case": p.case.value, "g": p.g,
                      "cross_pairs": [list(x) for x in p.cross_pairs]})
    triples = []
    Rs = [_parse_R(args.R)] if args.R else list(combinations(range(1, args.s + 1), 3))
    for R in Rs:
        d = triple_profile(t, bp, R).to_json()
        d["missing"] = missing_counts(t, bp, R).to_json()
        triples.append(d)
    _emit({"D": list(bp.D), "pairs": pairs, "triples": triples}, args.format or "json")
    return OK


def cmd_search(args) -> int:
    res = max_stable(
        args.n, args.k, args.s, reduced=args.reduced, allow_large=args.allow_large,
        threads=args.threads, checkpoint=args.checkpoint,
    )
    payload = res.to_json()
    _emit(payload, args.format or "json", f"{res.max_size} {res.matched_construction}")
    return OK


def cmd_saturate(args) -> int:
    if args.file:
        fam = _load(args)
    else:
        if args.n is None:
            raise UsageError("give a .hyp file or --n")
        fam = Family(args.n, [], uniform_k=args.k)
    out = saturate(fam, args.s)
    payload = {"n": out.n, "size": len(out), "members": _family_rows(out)}
    _emit(payload, args.format or "text", format_hyp(out).rstrip("\n"))
    return OK


def cmd_audit(args) -> int:
    if args.s_min > args.s_max:
        raise UsageError("--s-min exceeds --s-max")
    recs = audit_mod.audit_catalog(range(args.s_min, args.s_max + 1), args.mode)
    fmt = args.format or "csv"
    if fmt == "csv":
        sys.stdout.write(audit_mod.to_csv(recs))
    elif fmt == "json":
        sys.stdout.write(audit_mod.to_json(recs) + "\n")
    else:
        for r in recs:
            mark = "ok " if r.as_expected else "BAD"
            sys.stdout.write(f"{mark} {r.id} s={r.s} n={r.n} {dict(r.extra) or ''} "
                             f"lhs={r.lhs} rhs={r.rhs} margin={r.margin}\n")
    bad = audit_mod.mismatches(recs) or audit_mod.monotone_violations(recs)
    return CHECK_FAILED if bad else OK


def cmd_pivotal(args) -> int:
    n0 = pivotal(args.s, args.k)
    _emit(n0, args.format or "text", str(n0))
    return OK


def run_suite(fmt: str) -> int:
    from .acceptance import run_all, table

    verdicts = run_all()
    if fmt == "json":
        _emit([{"criterion": v.number, "title": v.title, "passed": v.passed,
                "detail": v.detail} for v in verdicts], "json")
    else:
        sys.stdout.write(table(verdicts) + "\n")
    return OK if all(v.passed for v in verdicts) else CHECK_FAILED


# --------------------------------------------------------------------------
# parser
# --------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("json", "csv", "text"), default=None)
    common.add_argument("--threads", type=int, default=None,
                        help="worker processes (default: MATCHLAB_THREADS or all cores)")

    p = argparse.ArgumentParser(prog="matchlab", parents=[common],
                                description="Families of sets with bounded matching number.")
    p.add_argument("--acceptance", dest="suite", action="store_true",
                   help="run the acceptance battery and print a pass/fail table")
    sub = p.add_subparsers(dest="command")

    def add(name, fn, help_, file=False, k_default=3, need_s=True):
        sp = sub.add_parser(name, parents=[common], help=help_)
        if file:
            sp.add_argument("file", help=".hyp family file")
        sp.add_argument("--k", type=int, default=k_default)
        if need_s:
            sp.add_argument("--s", type=int, required=True)
        sp.set_defaults(func=fn)
        return sp

    add("nu", cmd_nu, "matching number", file=True, need_s=False)
    add("stable", cmd_stable, "check stability", file=True, need_s=False)
    add("stabilize", cmd_stabilize, "shift to a stable family", file=True, need_s=False)
    sp = add("build-a", cmd_build_a, "build the construction A_l(n)")
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--ell", type=int, required=True)
    add("trace", cmd_trace, "trace on the core", file=True)
    add("partition", cmd_partition, "canonical base partition", file=True)
    sp = add("restrict", cmd_restrict, "restriction to a set of blocks", file=True)
    sp.add_argument("--R", required=True, help="block indices, e.g. 1,2,3")
    sp = add("counting-lemma", cmd_counting_lemma, "check the counting identity", file=True)
    sp.add_argument("--n", type=int, default=None)
    sp = add("profile", cmd_profile, "pair and triple structure (k = 3)", file=True)
    sp.add_argument("--R", default=None, help="a single triple, e.g. 1,2,3")
    sp = add("search", cmd_search, "exact maximum over stable families")
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--reduced", action="store_true",
                    help="assume the members avoiding vertex 1 keep matching number s")
    sp.add_argument("--allow-large", action="store_true", help="unlock s = 3 (minutes)")
    sp.add_argument("--checkpoint", default=None, help="resumable state file")
    sp = add("saturate", cmd_saturate, "greedy lexicographic saturation")
    sp.add_argument("file", nargs="?", default=None)
    sp.add_argument("--n", type=int, default=None)
    sp = add("audit", cmd_audit, "exact audit of the inequality catalogue", need_s=False)
    sp.add_argument("--s-min", type=int, default=3)
    sp.add_argument("--s-max", type=int, default=50)
    sp.add_argument("--mode", choices=("n0", "n0_minus_1"), default="n0")
    add("pivotal", cmd_pivotal, "pivotal number")
    return p


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)  # exits with 2 on bad usage
    try:
        if args.suite:
            return run_suite(args.format or "text")
        if args.command is None:
            parser.print_usage(sys.stderr)
            return USAGE
        if args.threads is not None and args.threads < 1:
            raise UsageError("--threads must be positive")
        return args.func(args)
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        sys.stderr.write(f"matchlab: error: {exc}\n")
        return USAGE
    except PreconditionError as exc:
        sys.stderr.write(f"matchlab: precondition failed ({exc.reason}): {exc}\n")
        return USAGE
    except ValueError as exc:
        sys.stderr.write(f"matchlab: error: {exc}\n")
        return USAGE
    except AssertionError as exc:
        sys.stderr.write(f"matchlab: check failed: {exc}\n")
        return CHECK_FAILED


if __name__ == "__main__":
    sys.exit(main())
