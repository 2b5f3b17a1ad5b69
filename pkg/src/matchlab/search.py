"""Saturation and exact maximisation over stable families.

A maximal stable family on ``[n]`` is determined by its trace on the core
``[m]``, ``m = ks + k - 1``, and its size is the weighted count
``sum C(n - m, k - |H|)``.  :func:`max_stable` therefore searches over trace
families: collections of subsets of ``[m]`` of size at most k with matching
number at most s.  Without loss of generality the trace is closed under
lowering an element (``x -> x - 1``) and under adding vertices, since both
operations keep the matching number and can only raise the weight.  The
search is a branch-and-bound over such closed collections.

Determinism: the tree is cut at a fixed depth into independent branches.
Each branch starts from the same incumbent (one below the best known
construction) so its outcome does not depend on any other branch; a reducer
keeps the largest value and, among equal values, the lexicographically least
witness.  Running branches in a process pool therefore changes only the
wall-clock time.
"""

from __future__ import annotations

import json
import os
import random
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from itertools import combinations
from math import comb
from typing import Iterable, Iterator, Optional, Sequence

from .constructions import ExtremalSpec, build_A
from .core import (
    Family,
    bits_of,
    elementary_predecessors,
    elements_of,
    has_matching,
    matching_size,
    popcount,
    sort_key,
)

CHECKPOINT_FORMAT = "matchlab-search-checkpoint"
CHECKPOINT_VERSION = 1
DEFAULT_SPLIT_DEPTH = 4


# --------------------------------------------------------------------------
# saturation
# --------------------------------------------------------------------------


def saturate(fam: Family, s: int) -> Family:
    """Add k-sets in lexicographic order whenever the matching number stays <= s."""
    k = fam.uniform_k
    if k is None:
        raise ValueError("saturate needs a uniform family")
    masks = list(fam.masks)
    if matching_size(masks, cap=s + 1) > s:
        raise ValueError(f"matching number already exceeds {s}")
    present = set(masks)
    for combo in combinations(range(1, fam.n + 1), k):
        b = bits_of(combo)
        if b in present:
            continue
        if not has_matching(masks + [b], s + 1):
            masks.append(b)
            present.add(b)
    return fam.with_masks(masks)


def is_maximal(fam: Family, s: int) -> bool:
    """No k-set can be added without pushing the matching number above s."""
    k = fam.uniform_k
    masks = list(fam.masks)
    present = set(masks)
    for combo in combinations(range(1, fam.n + 1), k):
        b = bits_of(combo)
        if b not in present and not has_matching(masks + [b], s + 1):
            return False
    return True


def random_stable_saturation(
    n: int,
    k: int,
    s: int,
    rng: random.Random,
    seed: Iterable = (),
) -> Family:
    """A random maximal stable family with matching number at most s.

    Starting from the down-closure of ``seed``, repeatedly add a random
    missing k-set all of whose elementary predecessors are present, unless it
    would raise the matching number above s.  A set that is refused once stays
    refused, because the family only grows.  When no candidate remains the
    family is maximal: a missing set that could be added has a lowest missing
    predecessor that could be added as well (shifting never raises the
    matching number).
    """
    from .core import down_closure

    seed_masks = [bits_of(e) if not isinstance(e, int) else e for e in seed]
    members = set(down_closure(seed_masks))
    if members and matching_size(list(members), cap=s + 1) > s:
        raise ValueError(f"seed has matching number above {s}")
    refused: set[int] = set()
    all_sets = [bits_of(c) for c in combinations(range(1, n + 1), k)]
    while True:
        cands = [
            b for b in all_sets
            if b not in members and b not in refused
            and all(p in members for p in elementary_predecessors(b))
        ]
        if not cands:
            break
        rng.shuffle(cands)
        progressed = False
        for b in cands:
            if not all(p in members for p in elementary_predecessors(b)):
                continue
            if has_matching(list(members) + [b], s + 1):
                refused.add(b)
            else:
                members.add(b)
                progressed = True
        if not progressed:
            break
    return Family(n, members, uniform_k=k)


def random_reduced_saturation(n: int, k: int, s: int, rng: random.Random) -> Family:
    """Like :func:`random_stable_saturation`, seeded with s disjoint k-sets
    avoiding vertex 1 inside the core, so the members avoiding 1 still have
    matching number s."""
    m = k * s + k - 1
    verts = list(range(2, m + 1))
    rng.shuffle(verts)
    seed = [tuple(sorted(verts[i * k:(i + 1) * k])) for i in range(s)]
    return random_stable_saturation(n, k, s, rng, seed)


# --------------------------------------------------------------------------
# the trace search space
# --------------------------------------------------------------------------


class TraceSpace:
    """Subsets of the core with nonzero weight, with closure bitsets.

    Elements are indexed ``0..N-1``; ``down[i]`` is the bitset of everything
    forced in when element i is included (all sets reachable by lowering and
    by adding vertices), ``up[i]`` everything forced out when i is excluded.
    """

    def __init__(self, n: int, k: int, s: int, reduced: bool = False) -> None:
        self.n, self.k, self.s, self.reduced = n, k, s, reduced
        self.m = m = k * s + k - 1
        self.outside = t = n - m
        lo = max(1, k - t, 2 if reduced else 1)
        self.elems: list[int] = []
        for size in range(lo, k + 1):
            self.elems.extend(bits_of(c) for c in combinations(range(1, m + 1), size))
        index = {e: i for i, e in enumerate(self.elems)}
        self.index = index
        self.N = N = len(self.elems)
        self.weights = [comb(t, k - popcount(e)) for e in self.elems]
        succ: list[list[int]] = [[] for _ in range(N)]
        for i, e in enumerate(self.elems):
            succ[i].extend(index[g] for g in elementary_predecessors(e))
            if popcount(e) < k:
                succ[i].extend(index[e | 1 << v] for v in range(1, m + 1) if not e >> v & 1)
        # transitive closure of the forcing relation, by iterative DFS
        down = [0] * N
        done = [False] * N
        for root in range(N):
            if done[root]:
                continue
            stack = [(root, 0)]
            while stack:
                i, pos = stack[-1]
                if pos < len(succ[i]):
                    stack[-1] = (i, pos + 1)
                    j = succ[i][pos]
                    if not done[j]:
                        stack.append((j, 0))
                    continue
                stack.pop()
                acc = 1 << i
                for j in succ[i]:
                    acc |= down[j]
                down[i] = acc
                done[i] = True
        self.down = down
        up = [0] * N
        for i in range(N):
            d = down[i]
            while d:
                low = d & -d
                up[low.bit_length() - 1] |= 1 << i
                d ^= low
        self.up = up
        # one-vertex-smaller subsets that are themselves elements
        self.smaller = [0] * N
        for i, e in enumerate(self.elems):
            acc = 0
            for v in elements_of(e):
                j = index.get(e & ~(1 << v))
                if j is not None:
                    acc |= 1 << j
            self.smaller[i] = acc
        self.full = (1 << N) - 1

    def weight(self, bits: int) -> int:
        w = self.weights
        total = 0
        while bits:
            low = bits & -bits
            total += w[low.bit_length() - 1]
            bits ^= low
        return total

    def members(self, bits: int) -> list[int]:
        out = []
        while bits:
            low = bits & -bits
            out.append(self.elems[low.bit_length() - 1])
            bits ^= low
        return out

    def feasible(self, bits: int) -> bool:
        """Matching number of the chosen sets is at most s.

        Only inclusion-minimal chosen sets matter for disjointness.
        """
        edges = []
        b = bits
        while b:
            low = b & -b
            i = low.bit_length() - 1
            if not self.smaller[i] & bits:
                edges.append(self.elems[i])
            b ^= low
        return not has_matching(edges, self.s + 1)

    def construction_value(self, ell: int) -> int:
        """Weight of the construction ``A_ell`` restricted to this space."""
        core = ell * self.s + ell - 1
        cmask = bits_of(range(1, core + 1))
        return sum(
            w for e, w in zip(self.elems, self.weights) if popcount(e & cmask) >= ell
        )


@dataclass
class _BranchOutcome:
    prefix: str
    best: Optional[int]
    witness: Optional[tuple[int, ...]]
    nodes: int


class _Solver:
    """Branch-and-bound below a node of the decision tree."""

    def __init__(self, space: TraceSpace, floor: int) -> None:
        self.sp = space
        self.floor = floor

    def propagate(self, I: int, E: int) -> tuple[int, Optional[int]]:
        """Exclude everything whose inclusion would break feasibility.
        Returns the new excluded set and the undecided set, or None if pruned."""
        sp = self.sp
        U = sp.full & ~I & ~E
        b = U
        while b:
            low = b & -b
            y = low.bit_length() - 1
            b ^= low
            if E >> y & 1:
                continue
            if not sp.feasible(I | sp.down[y]):
                E |= sp.up[y]
        return E, sp.full & ~I & ~E

    def choose(self, U: int) -> int:
        sp = self.sp
        best_y, best_w = -1, -1
        b = U
        while b:
            low = b & -b
            y = low.bit_length() - 1
            b ^= low
            w = sp.weight(sp.down[y] & U)
            if w > best_w:
                best_y, best_w = y, w
        return best_y

    def step(self, I: int, E: int, best: int):
        """Process one node: ('pruned',), ('leaf', value) or ('branch', y, E)."""
        E, U = self.propagate(I, E)
        wi = self.sp.weight(I)
        if wi + self.sp.weight(U) <= best:
            return ("pruned",)
        if not U:
            return ("leaf", wi)
        return ("branch", self.choose(U), E)

    def solve(self, I: int, E: int) -> tuple[int, Optional[int], int]:
        """Best value above the floor below (I, E), its include-set, node count."""
        sp = self.sp
        best = self.floor
        best_I: Optional[int] = None
        nodes = 0
        stack = [(I, E)]
        while stack:
            I, E = stack.pop()
            nodes += 1
            res = self.step(I, E, best)
            if res[0] == "pruned":
                continue
            if res[0] == "leaf":
                best, best_I = res[1], I
                continue
            y, E = res[1], res[2]
            # include branch explored first
            stack.append((I, E | sp.up[y]))
            stack.append((I | sp.down[y], E))
        return best, best_I, nodes

    def replay(self, prefix: str) -> tuple[Optional[tuple[int, int]], int]:
        """Walk the decision path ``prefix`` ('I'/'E' letters) from the root.
        Returns the node reached (or None if the path dies) and the number of
        internal nodes passed."""
        sp = self.sp
        I = E = 0
        for depth, letter in enumerate(prefix):
            res = self.step(I, E, self.floor)
            if res[0] != "branch":
                return None, depth
            y, E = res[1], res[2]
            if letter == "I":
                I |= sp.down[y]
            else:
                E |= sp.up[y]
        return (I, E), len(prefix)


def split_prefixes(space: TraceSpace, floor: int, depth: int) -> tuple[list[str], int]:
    """Decision paths of length ``depth`` (or shorter where the tree ends).

    Returns the prefixes in tree order together with the number of internal
    nodes above them.
    """
    solver = _Solver(space, floor)
    out: list[str] = []
    internal = 0
    stack = [("", 0, 0)]
    while stack:
        prefix, I, E = stack.pop()
        if len(prefix) == depth:
            out.append(prefix)
            continue
        res = solver.step(I, E, floor)
        if res[0] != "branch":
            out.append(prefix)
            continue
        internal += 1
        y, E2 = res[1], res[2]
        stack.append((prefix + "E", I, E2 | space.up[y]))
        stack.append((prefix + "I", I | space.down[y], E2))
    return out, internal


def _solve_prefix(space: TraceSpace, floor: int, prefix: str) -> _BranchOutcome:
    solver = _Solver(space, floor)
    node, _ = solver.replay(prefix)
    if node is None:
        return _BranchOutcome(prefix, None, None, 1)
    best, best_I, nodes = solver.solve(*node)
    if best_I is None:
        return _BranchOutcome(prefix, None, None, nodes)
    witness = tuple(sorted(space.members(best_I), key=sort_key))
    return _BranchOutcome(prefix, best, witness, nodes)


_WORKER: dict = {}


def _worker_init(n: int, k: int, s: int, reduced: bool, floor: int) -> None:
    _WORKER["space"] = TraceSpace(n, k, s, reduced)
    _WORKER["floor"] = floor


def _worker_run(prefix: str) -> _BranchOutcome:
    return _solve_prefix(_WORKER["space"], _WORKER["floor"], prefix)


# --------------------------------------------------------------------------
# checkpoints
# --------------------------------------------------------------------------


def _header(n: int, k: int, s: int, reduced: bool, depth: int) -> dict:
    return {
        "format": CHECKPOINT_FORMAT,
        "version": CHECKPOINT_VERSION,
        "n": n, "k": k, "s": s, "reduced": reduced, "depth": depth,
    }


def load_checkpoint(path: str, header: dict) -> dict[str, _BranchOutcome]:
    """Finished branches recorded in ``path``; an absent file means none."""
    if not os.path.exists(path):
        return {}
    done: dict[str, _BranchOutcome] = {}
    with open(path, encoding="utf-8") as fh:
        lines = [ln for ln in fh.read().splitlines() if ln.strip()]
    if not lines:
        return {}
    if json.loads(lines[0]) != header:
        raise ValueError(f"checkpoint {path} belongs to a different search")
    for ln in lines[1:]:
        try:
            rec = json.loads(ln)
        except json.JSONDecodeError:
            break  # torn final write; the branch is simply redone
        if rec.get("status") != "done":
            continue
        wit = rec["witness"]
        done[rec["prefix"]] = _BranchOutcome(
            rec["prefix"],
            rec["best"],
            None if wit is None else tuple(bits_of(e) for e in wit),
            rec["nodes"],
        )
    return done


def _drop_torn_tail(path: str) -> None:
    """Cut a partially written last line so that new records start cleanly."""
    with open(path, "rb+") as fh:
        data = fh.read()
        if not data or data.endswith(b"\n"):
            return
        cut = data.rfind(b"\n") + 1
        fh.truncate(cut)


def _append_record(path: str, out: _BranchOutcome) -> None:
    rec = {
        "prefix": out.prefix,
        "status": "done",
        "best": out.best,
        "witness": None if out.witness is None else [list(elements_of(b)) for b in out.witness],
        "nodes": out.nodes,
    }
    with open(path, "a", encoding="utf-8") as fh:
        fh.write(json.dumps(rec) + "\n")
        fh.flush()
        os.fsync(fh.fileno())


# --------------------------------------------------------------------------
# max_stable
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class SearchResult:
    n: int
    k: int
    s: int
    max_size: int
    witness: Family
    trace_witness: Family
    nodes_explored: int
    matched_construction: str
    reduced: bool = False

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "k": self.k,
            "s": self.s,
            "reduced": self.reduced,
            "max_size": self.max_size,
            "matched": self.matched_construction,
            "nodes_explored": self.nodes_explored,
            "trace_witness": [list(elements_of(b)) for b in self.trace_witness.masks],
        }


def default_threads() -> int:
    env = os.environ.get("MATCHLAB_THREADS")
    if env:
        try:
            val = int(env)
        except ValueError:
            raise ValueError(f"MATCHLAB_THREADS must be an integer, got {env!r}")
        if val < 1:
            raise ValueError("MATCHLAB_THREADS must be positive")
        return val
    return os.cpu_count() or 1


def _check_guard(n: int, k: int, s: int, allow_large: bool) -> None:
    if k < 2 or s < 1:
        raise ValueError("parameters out of range")
    if n < k * s + k - 1:
        raise ValueError(f"n must be at least ks+k-1 = {k * s + k - 1}")
    if k > 3 or s > 3 or (s == 3 and not allow_large):
        raise ValueError("beyond desk scale")


def _expand_trace(n: int, k: int, m: int, trace_masks: Sequence[int]) -> Family:
    out = []
    outside = range(m + 1, n + 1)
    for h in trace_masks:
        for extra in combinations(outside, k - popcount(h)):
            out.append(h | bits_of(extra))
    return Family(n, out, uniform_k=k)


def max_stable(
    n: int,
    k: int,
    s: int,
    *,
    reduced: bool = False,
    allow_large: bool = False,
    threads: Optional[int] = None,
    checkpoint: Optional[str] = None,
    split_depth: int = DEFAULT_SPLIT_DEPTH,
) -> SearchResult:
    """Largest family on ``[n]`` of k-sets with matching number s.

    ``reduced`` drops one-element traces (families whose members avoiding
    vertex 1 still have matching number s never have them).  ``allow_large``
    unlocks s = 3, which takes minutes; pair it with ``checkpoint`` to make
    the run resumable.  ``threads`` defaults to ``MATCHLAB_THREADS`` or the
    number of cores.
    """
    _check_guard(n, k, s, allow_large)
    if split_depth < 0:
        raise ValueError("split depth must be non-negative")
    space = TraceSpace(n, k, s, reduced)
    lower = max(space.construction_value(1), space.construction_value(k))
    floor = lower - 1
    prefixes, internal = split_prefixes(space, floor, split_depth)

    header = _header(n, k, s, reduced, split_depth)
    done: dict[str, _BranchOutcome] = {}
    if checkpoint is not None:
        done = load_checkpoint(checkpoint, header)
        if os.path.exists(checkpoint):
            _drop_torn_tail(checkpoint)
        if not os.path.exists(checkpoint) or os.path.getsize(checkpoint) == 0:
            with open(checkpoint, "w", encoding="utf-8") as fh:
                fh.write(json.dumps(header) + "\n")
    pending = [p for p in prefixes if p not in done]

    threads = default_threads() if threads is None else threads
    if threads < 1:
        raise ValueError("threads must be positive")

    def record(out: _BranchOutcome) -> None:
        done[out.prefix] = out
        if checkpoint is not None:
            _append_record(checkpoint, out)

    if threads == 1 or len(pending) <= 1:
        for p in pending:
            record(_solve_prefix(space, floor, p))
    else:
        with ProcessPoolExecutor(
            max_workers=threads,
            initializer=_worker_init,
            initargs=(n, k, s, reduced, floor),
        ) as pool:
            for out in pool.map(_worker_run, pending):
                record(out)

    outcomes = [done[p] for p in prefixes]
    best_val, best_wit = _reduce(outcomes)
    if best_wit is None:
        raise AssertionError("search found nothing at the construction value")
    nodes = internal + sum(o.nodes for o in outcomes)
    trace_fam = Family(space.m, best_wit)
    witness = _expand_trace(n, k, space.m, best_wit)
    assert len(witness) == best_val
    return SearchResult(
        n, k, s, best_val, witness, trace_fam, nodes,
        _match_construction(witness, n, k, s), reduced,
    )


def _reduce(outcomes: Iterable[_BranchOutcome]) -> tuple[int, Optional[tuple[int, ...]]]:
    """Largest value; among equals the lexicographically least witness."""
    best_val, best_wit, best_key = -1, None, None
    for o in outcomes:
        if o.best is None:
            continue
        key = tuple(elements_of(b) for b in o.witness)
        if o.best > best_val or (o.best == best_val and key < best_key):
            best_val, best_wit, best_key = o.best, o.witness, key
    return best_val, best_wit


def _match_construction(fam: Family, n: int, k: int, s: int) -> str:
    for ell, label in ((k, "A_k"), (1, "A_1")):
        try:
            if fam == build_A(ExtremalSpec(n, k, s, ell)):
                return label
        except ValueError:
            continue
    return "OTHER"


# --------------------------------------------------------------------------
# independent oracle
# --------------------------------------------------------------------------


def naive_max(n: int, k: int, s: int) -> int:
    """Largest family of k-subsets of ``[n]`` with matching number at most s,
    found by trying every subfamily (largest first).  No stability is
    assumed."""
    total = comb(n, k)
    if total > 20:
        raise ValueError("too large for full enumeration (C(n,k) > 20)")
    edges = [bits_of(c) for c in combinations(range(1, n + 1), k)]
    # index sets of s+1 pairwise disjoint edges
    bad = []
    for combo in combinations(range(total), s + 1):
        acc, ok = 0, True
        for i in combo:
            if acc & edges[i]:
                ok = False
                break
            acc |= edges[i]
        if ok:
            bad.append(sum(1 << i for i in combo))
    for size in range(total, -1, -1):
        for chosen in combinations(range(total), size):
            sel = sum(1 << i for i in chosen)
            if all(b & ~sel for b in bad):
                return size
    return 0


def iter_prefix_outcomes(path: str) -> Iterator[dict]:
    """Raw records of a checkpoint file, header first (for inspection)."""
    with open(path, encoding="utf-8") as fh:
        for ln in fh:
            if ln.strip():
                yield json.loads(ln)
