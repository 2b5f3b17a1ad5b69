"""Structure of restrictions for 3-uniform families: pairs of blocks, triples
of blocks, and the counts of sets that must be missing.

Notation follows the block layout of :class:`~matchlab.traces.BasePartition`:
block r is ``(a_r, b_r, c_r)``, ``d = d_2`` is the second element of ``D``,
and for a triple R the columns are ``A = {a_r}``, ``B = {b_r}``, ``C = {c_r}``.
Blocks are listed in lexicographic order, so ``a_r`` increases with r.

Everything is decided by brute force over ``X(R)`` (at most 11 vertices).
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations, permutations, product
from typing import Optional, Sequence

from .core import Family, VertexSet, bits_of, elements_of, is_stable, mask_dominates, matching_size, popcount
from .traces import (
    BasePartition,
    PreconditionError,
    TraceFamily,
    base_partition,
    f_value,
    restriction,
    trace,
)


def _require_k3(bp: BasePartition) -> None:
    if bp.k != 3:
        raise PreconditionError("k", "structure predicates are for k = 3")


def _abc(bp: BasePartition, r: int) -> tuple[int, int, int]:
    return bp.block(r).to_tuple()  # type: ignore[return-value]


# --------------------------------------------------------------------------
# pairs of blocks
# --------------------------------------------------------------------------


class PairCase(enum.Enum):
    SMALL = "SMALL"      # fewer than three cross pairs
    CASE_I = "CASE_I"    # {a_i a_j, a_i b_j, b_i a_j, b_i b_j}
    CASE_II = "CASE_II"  # {a_i a_j, a_i b_j, b_i a_j}
    CASE_III = "CASE_III"  # {a_i a_j, a_i b_j, a_i c_j}
    OTHER = "OTHER"      # none of the above: the trichotomy fails


@dataclass(frozen=True)
class PairProfile:
    pair: tuple[int, int]
    cross_pairs: tuple[VertexSet, ...]   # 2-sets meeting both blocks
    inner_pairs: tuple[VertexSet, ...]   # 2-sets of width 1
    case: PairCase

    @property
    def g(self) -> int:
        return len(self.cross_pairs)


def check_pair_hypotheses(t: TraceFamily, bp: BasePartition, pair: Sequence[int]) -> None:
    """``d_1 = 1`` and neither ``(a, c)`` nor ``(b, c)`` of either block is a trace member."""
    _require_k3(bp)
    if bp.d[0] != 1:
        raise PreconditionError("d1", "needs d_1 = 1")
    for r in pair:
        a, b, c = _abc(bp, r)
        for h in ((a, c), (b, c)):
            if bits_of(h) in t.base:
                raise PreconditionError("pair-side", f"{h} unexpectedly in the trace")


def classify_pair(t: TraceFamily, bp: BasePartition, u: int, v: int) -> PairProfile:
    i, j = sorted((u, v))
    if i == j:
        raise ValueError("pair needs two distinct blocks")
    check_pair_hypotheses(t, bp, (i, j))
    H = restriction(t, bp, (i, j), weights=False)
    cross = tuple(m.H for m in H.members if len(m.H) == 2 and m.width == 2)
    inner = tuple(m.H for m in H.members if len(m.H) == 2 and m.width == 1)
    ai, bi, _ = _abc(bp, i)
    aj, bj, cj = _abc(bp, j)
    got = {m.bits for m in cross}
    shapes = (
        (PairCase.CASE_I, [(ai, aj), (ai, bj), (bi, aj), (bi, bj)]),
        (PairCase.CASE_II, [(ai, aj), (ai, bj), (bi, aj)]),
        (PairCase.CASE_III, [(ai, aj), (ai, bj), (ai, cj)]),
    )
    if len(got) < 3:
        case = PairCase.SMALL
    else:
        case = PairCase.OTHER
        for label, sets in shapes:
            if got == {bits_of(p) for p in sets}:
                case = label
                break
    return PairProfile((i, j), cross, inner, case)


def pair_forced_absences(bp: BasePartition, profile: PairProfile) -> list[VertexSet]:
    """Sets that must be absent given the pair's case.

    Cases I and II: ``{1,c_i,c_j}``, ``(1,c_i)``, ``(1,c_j)``, and the width-2
    sets ``{x,d,c_j}`` (x in block i), ``(a_j,d,c_i)``, ``(b_j,d,c_i)``.
    Case III: ``{x,y,d}`` for x in ``{b_i, c_i}`` and y in block j.
    """
    i, j = profile.pair
    ai, bi, ci = _abc(bp, i)
    aj, bj, cj = _abc(bp, j)
    d = bp.d[1]
    out: list[tuple[int, ...]] = []
    if profile.case in (PairCase.CASE_I, PairCase.CASE_II):
        out += [(1, ci, cj), (1, ci), (1, cj), (ai, d, cj), (aj, d, ci)]
        out += [(x, d, cj) for x in (ai, bi, ci)]
        out += [(aj, d, ci), (bj, d, ci)]
    elif profile.case is PairCase.CASE_III:
        out += [(x, y, d) for x in (bi, ci) for y in (aj, bj, cj)]
    seen: dict[int, VertexSet] = {}
    for s in out:
        seen.setdefault(bits_of(s), VertexSet(s))
    return list(seen.values())


def pair_violations(t: TraceFamily, bp: BasePartition, profile: PairProfile) -> list[VertexSet]:
    return [S for S in pair_forced_absences(bp, profile) if S in t.base]


# --------------------------------------------------------------------------
# diagonals and transversals (any k)
# --------------------------------------------------------------------------


def _check_R(bp: BasePartition, R: Sequence[int]) -> tuple[int, ...]:
    R = tuple(sorted(R))
    if len(R) != bp.k or len(set(R)) != len(R):
        raise ValueError(f"need exactly k = {bp.k} distinct block indices")
    return R


def transversals(bp: BasePartition, R: Sequence[int]) -> list[VertexSet]:
    """k-sets with one vertex in each block of R."""
    R = _check_R(bp, R)
    return [VertexSet(p) for p in product(*(bp.block(r).to_tuple() for r in R))]


def diagonals(bp: BasePartition, R: Sequence[int]) -> list[VertexSet]:
    """Transversals that also use every column exactly once."""
    R = _check_R(bp, R)
    return [
        VertexSet(bp.a(q, r) for q, r in zip(perm, R))
        for perm in permutations(range(1, bp.k + 1))
    ]


def _column_pattern(bp: BasePartition, R: Sequence[int], T: VertexSet) -> tuple[int, ...]:
    """Column index used in each block of R by the transversal T."""
    pat = []
    for r in R:
        block = bp.block(r).to_tuple()
        (x,) = [v for v in T if v in block]
        pat.append(block.index(x) + 1)
    return tuple(pat)


def transversals_above(bp: BasePartition, R: Sequence[int], D: VertexSet) -> list[VertexSet]:
    """Transversals T whose vertex in each block sits in the same or a later
    column than D's vertex in that block.  Each such T satisfies ``D << T``;
    for a diagonal there are exactly k! of them."""
    R = _check_R(bp, R)
    base = _column_pattern(bp, R, D)
    return [
        T for T in transversals(bp, R)
        if all(p >= q for p, q in zip(_column_pattern(bp, R, T), base))
    ]


def dominated_transversal_count(bp: BasePartition, R: Sequence[int], D: VertexSet) -> int:
    """Number of transversals T with ``D << T`` in the full dominance order
    (can exceed the blockwise count when blocks interleave)."""
    return sum(1 for T in transversals(bp, R) if mask_dominates(D.bits, T.bits))


def is_normal(bp: BasePartition, R: Sequence[int]) -> bool:
    """Every vertex of column q is below every vertex of column q' > q."""
    cols = bp.columns(_check_R(bp, R))
    return all(max(cols[q]) < min(cols[q + 1]) for q in range(bp.k - 1))


# --------------------------------------------------------------------------
# triples
# --------------------------------------------------------------------------


def _two_disjoint_cover(members: set[int], target: int, pool: Sequence[int]) -> Optional[tuple[int, int]]:
    """A split of ``target`` into two members drawn from ``pool``."""
    low = target & -target
    for h in pool:
        if h & low and not h & ~target and h in members:
            rest = target & ~h
            if rest in members:
                return h, rest
    return None


@dataclass(frozen=True)
class TripleProfile:
    R: tuple[int, int, int]
    columns: tuple[VertexSet, ...]
    normal: bool
    fat: bool
    slightly_fat: bool
    robust: bool
    Q: tuple[int, ...]
    g1: int
    g2: int
    pair_g: dict = field(default_factory=dict)
    robust_witnesses: tuple[tuple[VertexSet, ...], ...] = ()
    fat_witness: Optional[tuple[VertexSet, VertexSet]] = None
    total_weight: Fraction = Fraction(0)

    @property
    def sufficiently_fat(self) -> bool:
        return bool(self.Q)

    def to_json(self) -> dict:
        return {
            "R": list(self.R),
            "columns": [list(c) for c in self.columns],
            "normal": self.normal,
            "fat": self.fat,
            "slightly_fat": self.slightly_fat,
            "robust": self.robust,
            "sufficiently_fat": self.sufficiently_fat,
            "Q": list(self.Q),
            "g1": self.g1,
            "g2": self.g2,
            "total_weight": f"{self.total_weight.numerator}/{self.total_weight.denominator}",
        }


def q_set(t: TraceFamily, bp: BasePartition, R: Sequence[int]) -> tuple[int, ...]:
    """Blocks u of R such that ``{a_u, b_v, b_z, c_u, c_v, c_z}`` splits into
    two disjoint trace members."""
    R = _check_R(bp, R)
    members = set(t.masks)
    out = []
    for u in R:
        v, z = [r for r in R if r != u]
        au, _, cu = _abc(bp, u)
        _, bv, cv = _abc(bp, v)
        _, bz, cz = _abc(bp, z)
        target = bits_of((au, bv, bz, cu, cv, cz))
        pool = [bits_of(c) for c in combinations(elements_of(target), 3)]
        if _two_disjoint_cover(members, target, pool):
            out.append(u)
    return tuple(out)


def triple_profile(t: TraceFamily, bp: BasePartition, R: Sequence[int]) -> TripleProfile:
    _require_k3(bp)
    R = _check_R(bp, R)
    H = restriction(t, bp, R)
    members = {m.H.bits for m in H.members}
    cols = bp.columns(R)
    A, B, C = (c.bits for c in cols)

    fat_pool = [bits_of(c) for c in combinations(elements_of(B | C), 3)]
    fat_pair = _two_disjoint_cover(members, B | C, fat_pool)
    slim_pool = [T.bits for T in transversals(bp, R)]
    slightly = _two_disjoint_cover(members, A | C, slim_pool) is not None

    # the 2-sets must avoid D; otherwise vertex 1 could not be added to them
    union = A | B | C
    pairs = sorted(h for h in members if popcount(h) == 2 and not h & ~union)
    witnesses = []
    for trio in combinations(pairs, 3):
        x, y, z = trio
        if not (x & y or x & z or y & z):
            witnesses.append(tuple(VertexSet.from_bits(h) for h in trio))

    g1 = sum(1 for m in H.members if len(m.H) == 2 and m.width == 1)
    g2 = sum(1 for m in H.members if len(m.H) == 2 and m.width == 2)
    pair_g = {}
    for u, v in combinations(R, 2):
        Hp = restriction(t, bp, (u, v), weights=False)
        pair_g[(u, v)] = sum(1 for m in Hp.members if len(m.H) == 2 and m.width == 2)

    return TripleProfile(
        R=R,  # type: ignore[arg-type]
        columns=cols,
        normal=is_normal(bp, R),
        fat=fat_pair is not None,
        slightly_fat=slightly,
        robust=bool(witnesses),
        Q=q_set(t, bp, R),
        g1=g1,
        g2=g2,
        pair_g=pair_g,
        robust_witnesses=tuple(witnesses),
        fat_witness=None if fat_pair is None else tuple(VertexSet.from_bits(h) for h in fat_pair),  # type: ignore[arg-type]
        total_weight=H.total_weight(),
    )


@dataclass(frozen=True)
class MissingCounts:
    missing_w3_in_BC: int      # of the 8 width-3 triples inside B u C
    missing_w2_in_BC: int      # of the 12 width-2 triples inside B u C
    transversals_missing: int  # of all 27 transversals
    transversals_present: int  # width-3 members of H(R)
    missing_w2_triples: int    # width-2 triples inside the three blocks

    def to_json(self) -> dict:
        return dict(self.__dict__)


def missing_counts(t: TraceFamily, bp: BasePartition, R: Sequence[int]) -> MissingCounts:
    _require_k3(bp)
    R = _check_R(bp, R)
    members = set(t.masks)
    cols = bp.columns(R)
    BC = cols[1].bits | cols[2].bits
    union = 0
    for r in R:
        union |= bp.block(r).bits

    def width(h: int) -> int:
        return bp.width(h, R)

    m3 = m2 = 0
    for c in combinations(elements_of(BC), 3):
        h = bits_of(c)
        if h in members:
            continue
        if width(h) == 3:
            m3 += 1
        elif width(h) == 2:
            m2 += 1
    trans = [T.bits for T in transversals(bp, R)]
    tmiss = sum(1 for h in trans if h not in members)
    w2 = sum(
        1 for c in combinations(elements_of(union), 3)
        if width(bits_of(c)) == 2 and bits_of(c) not in members
    )
    return MissingCounts(m3, m2, tmiss, len(trans) - tmiss, w2)


# --------------------------------------------------------------------------
# checked claims on families satisfying the standing hypotheses
# --------------------------------------------------------------------------


def check_structure_hypotheses(fam: Family, s: int) -> None:
    """Stable, 3-uniform, matching number s, ``d_1 = 1``."""
    if fam.uniform_k != 3:
        raise PreconditionError("uniformity", "family is not 3-uniform")
    if not is_stable(fam)[0]:
        raise PreconditionError("unstable", "family is not stable")
    if matching_size(fam.masks) != s:
        raise PreconditionError("nu", f"matching number differs from {s}")
    if base_partition(fam, 3, s).d[0] != 1:
        raise PreconditionError("d1", "d_1 differs from 1")


def robust_claim_violations(t: TraceFamily, bp: BasePartition, prof: TripleProfile) -> list[str]:
    """For each disjoint triple of 2-sets H_1, H_2, H_3: every member meets
    ``{1} u H_1 u H_2 u H_3`` at least twice, and the union of the three
    2-sets is the first two columns."""
    out = []
    T12 = prof.columns[0].bits | prof.columns[1].bits
    X = bp.X(prof.R).bits
    members = [h for h in t.masks if not h & ~X]
    for wit in prof.robust_witnesses:
        Y = 1 << 1
        for h in wit:
            Y |= h.bits
        if (Y & ~(1 << 1)) != T12:
            out.append(f"R={prof.R}: witness {wit} does not cover the first two columns")
        for h in members:
            if popcount(h & Y) < 2:
                out.append(f"R={prof.R}: member {elements_of(h)} meets {elements_of(Y)} once")
    return out


def triple_violations(
    t: TraceFamily, bp: BasePartition, prof: TripleProfile, f2: Optional[Fraction] = None
) -> list[str]:
    """Every claimed consequence that fails on this triple (empty when all hold)."""
    out: list[str] = []
    R = prof.R
    if sum(prof.pair_g.values()) != prof.g2:
        out.append(f"R={R}: g2 is not the sum over pairs")
    if not prof.robust and prof.g2 > 9:
        out.append(f"R={R}: not robust but g2 = {prof.g2} > 9")
    if prof.robust:
        out += robust_claim_violations(t, bp, prof)
        if f2 is None:
            f2 = f_value(2, t.n, 3, t.s)
        if prof.total_weight > f2:
            out.append(f"R={R}: robust but weight {prof.total_weight} > {f2}")
    members = set(t.masks)
    if all(D.bits in members for D in diagonals(bp, R)) and not prof.normal:
        out.append(f"R={R}: all diagonals present but not normal")
    if prof.fat and prof.normal:
        union = 0
        for r in R:
            union |= bp.block(r).bits
        for h in members:
            if not h & ~union and popcount(h) != 3:
                out.append(f"R={R}: fat and normal but {elements_of(h)} is small")
    for u in prof.Q:
        v, z = [r for r in R if r != u]
        pair = bits_of((bp.a(1, v), bp.a(1, z)))
        if pair in members:
            out.append(f"R={R}: {u} in Q but ({bp.a(1, v)},{bp.a(1, z)}) present")
    counts = missing_counts(t, bp, R)
    if not prof.fat and (counts.missing_w3_in_BC < 4 or counts.missing_w2_in_BC < 6):
        out.append(f"R={R}: not fat but too few missing sets in B u C ({counts})")
    if not prof.sufficiently_fat and (counts.transversals_present > 20 or counts.missing_w2_triples < 12):
        out.append(f"R={R}: not sufficiently fat but counts {counts}")
    if len(prof.Q) == 1 and (counts.transversals_present > 21 or counts.missing_w2_triples < 10):
        out.append(f"R={R}: |Q| = 1 but counts {counts}")
    if matching_size(restriction(t, bp, R, weights=False).masks()) != len(R):
        out.append(f"R={R}: restriction has the wrong matching number")
    return out


def structure_violations(fam: Family, s: int) -> list[str]:
    """Run every pair and triple check on a family meeting the hypotheses."""
    check_structure_hypotheses(fam, s)
    t = trace(fam, 3, s)
    bp = base_partition(fam, 3, s)
    out: list[str] = []
    for u, v in combinations(range(1, s + 1), 2):
        prof = classify_pair(t, bp, u, v)
        if prof.case is PairCase.OTHER:
            out.append(f"pair {prof.pair}: cross pairs {[x.to_tuple() for x in prof.cross_pairs]} fit no case")
        for S in pair_violations(t, bp, prof):
            out.append(f"pair {prof.pair} ({prof.case.value}): {S.to_tuple()} present")
        if matching_size(restriction(t, bp, (u, v), weights=False).masks()) != 2:
            out.append(f"pair {prof.pair}: restriction has the wrong matching number")
    f2 = f_value(2, fam.n, 3, s) if s >= 3 else None
    if s >= 3:
        for R in combinations(range(1, s + 1), 3):
            prof = triple_profile(t, bp, R)
            out += triple_violations(t, bp, prof, f2)
    return out
