"""Traces on the core ``[ks + k - 1]``, the canonical base partition,
restrictions ``H(R)`` with widths and weights, and the counting identity.

All weights are :class:`fractions.Fraction`; nothing here touches floats.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import combinations
from math import comb
from typing import Iterable, Optional, Sequence, Union

from .constructions import ExtremalSpec, build_A
from .core import (
    Family,
    VertexSet,
    bits_of,
    elements_of,
    has_matching,
    is_stable,
    matching_size,
    popcount,
)


class PreconditionError(ValueError):
    """An input violates a standing hypothesis; ``reason`` says which one."""

    def __init__(self, reason: str, message: str) -> None:
        super().__init__(message)
        self.reason = reason


def core_size(k: int, s: int) -> int:
    return k * s + k - 1


@dataclass(frozen=True)
class TraceFamily:
    """Intersections of the members of a k-uniform family with the core."""

    base: Family
    n: int
    k: int
    s: int

    @property
    def m(self) -> int:
        return core_size(self.k, self.s)

    @property
    def outside(self) -> int:
        """Number of vertices beyond the core, ``n - ks - k + 1``."""
        return self.n - self.m

    def multiplicity(self, size: int) -> int:
        """How many k-sets of ``[n]`` share a given trace of this size."""
        return comb(self.outside, self.k - size)

    def __len__(self) -> int:
        return len(self.base)

    def __contains__(self, item) -> bool:
        return item in self.base

    @property
    def masks(self) -> tuple[int, ...]:
        return self.base.masks


def trace(fam: Family, k: int, s: int) -> TraceFamily:
    m = core_size(k, s)
    if fam.n < m:
        raise ValueError(f"ground set [{fam.n}] smaller than the core [{m}]")
    if fam.uniform_k not in (None, k):
        raise ValueError(f"family is {fam.uniform_k}-uniform, expected {k}")
    core = bits_of(range(1, m + 1))
    out = set()
    for b in fam.masks:
        if popcount(b) != k:
            raise ValueError("trace needs a k-uniform family")
        h = b & core
        if not h:
            raise ValueError(f"member {elements_of(b)} misses the core [{m}]")
        out.add(h)
    return TraceFamily(Family(m, out), fam.n, k, s)


def size_formula(t: TraceFamily) -> int:
    """Size of the maximal family with this trace: sum of C(n-m, k-|H|)."""
    return sum(t.multiplicity(popcount(h)) for h in t.masks)


def expand(t: TraceFamily) -> Family:
    """All k-subsets of ``[n]`` whose trace lies in ``t``."""
    core = bits_of(range(1, t.m + 1))
    outside = range(t.m + 1, t.n + 1)
    members = []
    for h in t.masks:
        for extra in combinations(outside, t.k - popcount(h)):
            members.append(h | bits_of(extra))
    return Family(t.n, members, uniform_k=t.k)


# --------------------------------------------------------------------------
# base partition
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class BasePartition:
    """``[ks+k-1] = D + F_1 + ... + F_s`` with ``D`` lexicographically first."""

    D: VertexSet
    blocks: tuple[VertexSet, ...]
    k: int

    @property
    def s(self) -> int:
        return len(self.blocks)

    @property
    def d(self) -> tuple[int, ...]:
        return self.D.to_tuple()

    def block(self, i: int) -> VertexSet:
        """The i-th block, 1-based."""
        return self.blocks[i - 1]

    def a(self, q: int, i: int) -> int:
        """q-th smallest element of block i (both 1-based)."""
        return self.blocks[i - 1].to_tuple()[q - 1]

    def X(self, R: Sequence[int]) -> VertexSet:
        mask = self.D.bits
        for r in R:
            mask |= self.blocks[r - 1].bits
        return VertexSet.from_bits(mask)

    def columns(self, R: Sequence[int]) -> tuple[VertexSet, ...]:
        """``T_q = {a_q(r) : r in R}`` for q = 1..k."""
        return tuple(
            VertexSet(self.a(q, r) for r in R) for q in range(1, self.k + 1)
        )

    def width(self, h: int, R: Sequence[int]) -> int:
        return sum(1 for r in R if h & self.blocks[r - 1].bits)


def _perfect_partitions(edges: Sequence[int], target: int) -> Iterable[tuple[int, ...]]:
    """All ways to split ``target`` into members of ``edges``."""
    by_low: dict[int, list[int]] = {}
    for e in edges:
        if not e & ~target:
            by_low.setdefault(e & -e, []).append(e)

    def rec(rest: int, acc: tuple[int, ...]):
        if not rest:
            yield acc
            return
        low = rest & -rest
        for e in by_low.get(low, ()):
            if not e & ~rest:
                yield from rec(rest & ~e, acc + (e,))

    yield from rec(target, ())


def _partition_key(blocks: tuple[int, ...], k: int) -> tuple:
    tuples = sorted(elements_of(b) for b in blocks)
    sums = tuple(sum(t[q] for t in tuples) for q in range(k))
    return sums, tuple(tuples)


def base_partition(fam: Union[Family, TraceFamily], k: int, s: int) -> BasePartition:
    """The canonical partition of the core.

    ``D`` is the lexicographically first (k-1)-subset whose complement splits
    into s members.  Among those splits the tuple (sum of smallest elements,
    sum of second smallest, ...) is minimised; remaining ties go to the
    lexicographically least sorted list of blocks.
    """
    m = core_size(k, s)
    base = fam.base if isinstance(fam, TraceFamily) else fam
    core = bits_of(range(1, m + 1))
    edges = [b for b in base.masks if popcount(b) == k and not b & ~core]
    for dset in combinations(range(1, m + 1), k - 1):
        dmask = bits_of(dset)
        comp = core & ~dmask
        usable = [e for e in edges if not e & dmask]
        if not has_matching(usable, s):
            continue
        best = min(_perfect_partitions(usable, comp), key=lambda p: _partition_key(p, k))
        blocks = tuple(VertexSet(t) for t in _partition_key(best, k)[1])
        return BasePartition(VertexSet.from_bits(dmask), blocks, k)
    raise ValueError("family not partitionable")


# --------------------------------------------------------------------------
# restrictions, widths, weights
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class RestrictionMember:
    H: VertexSet
    width: int
    weight: Optional[Fraction]


@dataclass(frozen=True)
class Restriction:
    R: tuple[int, ...]
    X: VertexSet
    members: tuple[RestrictionMember, ...]

    def total_weight(self) -> Fraction:
        return sum((mem.weight for mem in self.members), Fraction(0))

    def sets(self) -> list[VertexSet]:
        return [mem.H for mem in self.members]

    def masks(self) -> list[int]:
        return [mem.H.bits for mem in self.members]

    def __contains__(self, item) -> bool:
        bits = item.bits if isinstance(item, VertexSet) else bits_of(item)
        return any(mem.H.bits == bits for mem in self.members)

    def __len__(self) -> int:
        return len(self.members)


def weight(t: TraceFamily, size: int, width: int) -> Fraction:
    """``C(n-ks-k+1, k-|H|) / C(s-v, k-v)``."""
    return Fraction(t.multiplicity(size), comb(t.s - width, t.k - width))


def restriction(
    t: TraceFamily, bp: BasePartition, R: Sequence[int], weights: bool = True
) -> Restriction:
    R = tuple(sorted(R))
    if len(set(R)) != len(R) or any(not 1 <= r <= bp.s for r in R):
        raise ValueError(f"index tuple {R} not inside [{bp.s}]")
    if weights and len(R) > t.k:
        raise ValueError("weights need |R| <= k")
    X = bp.X(R)
    members = []
    for h in t.masks:
        if h & ~X.bits:
            continue
        v = bp.width(h, R)
        w = weight(t, popcount(h), v) if weights else None
        members.append(RestrictionMember(VertexSet.from_bits(h), v, w))
    return Restriction(R, X, tuple(members))


@dataclass(frozen=True)
class CountingReport:
    n: int
    k: int
    s: int
    lhs: int
    rhs: Fraction
    R: Optional[tuple[int, ...]] = None

    @property
    def equal(self) -> bool:
        return self.rhs == self.lhs

    @property
    def holds(self) -> bool:
        return self.equal

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "k": self.k,
            "s": self.s,
            "R": None if self.R is None else list(self.R),
            "lhs": self.lhs,
            "rhs_num": self.rhs.numerator,
            "rhs_den": self.rhs.denominator,
            "holds": self.holds,
        }


def restriction_sums(t: TraceFamily, bp: BasePartition) -> dict[tuple[int, ...], Fraction]:
    """Total restricted weight for every k-subset R of the block indices."""
    return {
        R: restriction(t, bp, R).total_weight()
        for R in combinations(range(1, bp.s + 1), t.k)
    }


def counting_lemma_check(fam: Family, k: int, s: int, n: Optional[int] = None) -> CountingReport:
    """Compare ``|fam|`` with the sum of restricted weights over all k-tuples."""
    if s < k:
        raise ValueError("lemma requires s >= k")
    if n is not None and n != fam.n:
        raise ValueError(f"family lives on [{fam.n}], not [{n}]")
    t = trace(fam, k, s)
    bp = base_partition(fam, k, s)
    rhs = sum(restriction_sums(t, bp).values(), Fraction(0))
    return CountingReport(fam.n, k, s, len(fam), rhs)


@lru_cache(maxsize=None)
def _construction_parts(ell: int, n: int, k: int, s: int):
    fam = build_A(ExtremalSpec(n, k, s, ell))
    return trace(fam, k, s), base_partition(fam, k, s)


def f_value(ell: int, n: int, k: int, s: int, R: Optional[Sequence[int]] = None) -> Fraction:
    """Restricted weight of ``A_ell(n)`` at R (default ``(1, ..., k)``)."""
    if s < k:
        raise ValueError("lemma requires s >= k")
    t, bp = _construction_parts(ell, n, k, s)
    R = tuple(range(1, k + 1)) if R is None else tuple(R)
    return restriction(t, bp, R).total_weight()


def f_bound(n: int, k: int, s: int) -> Fraction:
    return max(f_value(ell, n, k, s) for ell in range(1, k + 1))


@dataclass(frozen=True)
class WeightBoundReport:
    n: int
    k: int
    s: int
    R: tuple[int, ...]
    value: Fraction
    bound: Fraction

    @property
    def holds(self) -> bool:
        return self.value <= self.bound

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "k": self.k,
            "s": self.s,
            "R": list(self.R),
            "lhs": f"{self.value.numerator}/{self.value.denominator}",
            "rhs_num": self.bound.numerator,
            "rhs_den": self.bound.denominator,
            "holds": self.holds,
        }


def check_standing_hypotheses(fam: Family, k: int, s: int) -> None:
    """Raise :class:`PreconditionError` unless the family is stable, has
    matching number s, and still has matching number s without vertex 1."""
    if s < k:
        raise PreconditionError("s<k", "bound requires s >= k")
    if fam.uniform_k != k:
        raise PreconditionError("uniformity", f"family is not {k}-uniform")
    if not is_stable(fam)[0]:
        raise PreconditionError("unstable", "family is not stable")
    if matching_size(fam.masks) != s:
        raise PreconditionError("nu", f"matching number differs from {s}")
    if matching_size(fam.avoiding(1).masks) != s:
        raise PreconditionError("nu-avoiding-1", f"members avoiding 1 have matching number below {s}")


def weight_bound_check(
    fam: Family,
    k: int,
    s: int,
    R: Optional[Sequence[int]] = None,
    check_preconditions: bool = True,
) -> WeightBoundReport:
    """Restricted weight of ``fam`` at R against ``max_l f(l)``."""
    if check_preconditions:
        check_standing_hypotheses(fam, k, s)
    elif s < k:
        raise ValueError("bound requires s >= k")
    R = tuple(range(1, k + 1)) if R is None else tuple(sorted(R))
    if len(R) != k:
        raise ValueError("R must have k indices")
    t = trace(fam, k, s)
    bp = base_partition(fam, k, s)
    value = restriction(t, bp, R).total_weight()
    return WeightBoundReport(fam.n, k, s, R, value, f_bound(fam.n, k, s))


# --------------------------------------------------------------------------
# facts about the canonical partition, as checks returning violations
# --------------------------------------------------------------------------


def missing_lex_predecessors(t: TraceFamily, bp: BasePartition) -> list[tuple[int, ...]]:
    """l-sets lexicographically before ``(d_1..d_l)``, l < k, absent from the trace."""
    d = bp.d
    out = []
    for ell in range(1, t.k):
        prefix = d[:ell]
        for e in combinations(range(1, t.m + 1), ell):
            if e >= prefix:
                break
            if bits_of(e) not in t.base:
                out.append(e)
    return out


def first_drop(bp: BasePartition, i: int) -> int:
    """Smallest l < k with ``a_l(i) < d_l``, or k if there is none."""
    d = bp.d
    for ell in range(1, bp.k):
        if bp.a(ell, i) < d[ell - 1]:
            return ell
    return bp.k


def inserted_sets(bp: BasePartition) -> list[VertexSet]:
    """``(d_1..d_{h-1}, a_h(i), d_h..d_{k-1})`` for every block i."""
    out = []
    d = bp.d
    for i in range(1, bp.s + 1):
        h = first_drop(bp, i)
        out.append(VertexSet(d[: h - 1] + (bp.a(h, i),) + d[h - 1:]))
    return out


def missing_inserted_sets(t: TraceFamily, bp: BasePartition) -> list[VertexSet]:
    return [D for D in inserted_sets(bp) if D not in t.base]


def missing_low_triples(t: TraceFamily, bp: BasePartition) -> list[int]:
    """Blocks i with ``{1, d_2, b_i}`` absent (k = 3, d_1 = 1)."""
    if t.k != 3 or bp.d[0] != 1:
        raise PreconditionError("d1", "needs k = 3 and d_1 = 1")
    d2 = bp.d[1]
    return [
        i for i in range(1, bp.s + 1)
        if VertexSet((1, d2, bp.a(2, i))) not in t.base
    ]


def blocks_interleave(bp: BasePartition) -> bool:
    """``a_1(u) < a_k(v)`` for every pair of distinct blocks."""
    return all(
        bp.a(1, u) < bp.a(bp.k, v)
        for u in range(1, bp.s + 1)
        for v in range(1, bp.s + 1)
        if u != v
    )
