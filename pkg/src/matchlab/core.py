"""Vertex sets, set families, exact matching numbers and the dominance order.

Vertices are 1-based: vertex ``v`` lives at bit ``v`` of the mask, bit 0 is
never set.  Families keep their members sorted by ``(cardinality, sorted
elements)`` so that every iteration order, witness and counterexample is
deterministic.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator, Optional, Sequence


def bits_of(elements: Iterable[int]) -> int:
    mask = 0
    for v in elements:
        if v < 1:
            raise ValueError(f"vertices are 1-based, got {v}")
        mask |= 1 << v
    return mask


def elements_of(mask: int) -> tuple[int, ...]:
    out = []
    while mask:
        low = mask & -mask
        out.append(low.bit_length() - 1)
        mask ^= low
    return tuple(out)


def popcount(mask: int) -> int:
    return bin(mask).count("1")


def sort_key(mask: int) -> tuple[int, tuple[int, ...]]:
    return (popcount(mask), elements_of(mask))


class VertexSet:
    """An immutable set of vertices stored as a bitmask."""

    __slots__ = ("bits",)

    def __init__(self, elements: Iterable[int] = ()) -> None:
        object.__setattr__(self, "bits", bits_of(elements))

    @classmethod
    def from_bits(cls, bits: int) -> "VertexSet":
        if bits & 1:
            raise ValueError("bit 0 does not correspond to a vertex")
        obj = cls.__new__(cls)
        object.__setattr__(obj, "bits", bits)
        return obj

    def __setattr__(self, name, value):
        raise AttributeError("VertexSet is immutable")

    def __iter__(self) -> Iterator[int]:
        return iter(elements_of(self.bits))

    def __len__(self) -> int:
        return popcount(self.bits)

    def cardinality(self) -> int:
        return popcount(self.bits)

    def __contains__(self, v: object) -> bool:
        return isinstance(v, int) and v >= 1 and bool(self.bits >> v & 1)

    def __eq__(self, other: object) -> bool:
        return isinstance(other, VertexSet) and other.bits == self.bits

    def __hash__(self) -> int:
        return hash(self.bits)

    def key(self) -> tuple[int, tuple[int, ...]]:
        return sort_key(self.bits)

    def __lt__(self, other: "VertexSet") -> bool:
        return self.key() < other.key()

    def __le__(self, other: "VertexSet") -> bool:
        return self.key() <= other.key()

    def __or__(self, other: "VertexSet") -> "VertexSet":
        return VertexSet.from_bits(self.bits | other.bits)

    def __and__(self, other: "VertexSet") -> "VertexSet":
        return VertexSet.from_bits(self.bits & other.bits)

    def __sub__(self, other: "VertexSet") -> "VertexSet":
        return VertexSet.from_bits(self.bits & ~other.bits)

    def isdisjoint(self, other: "VertexSet") -> bool:
        return not self.bits & other.bits

    def issubset(self, other: "VertexSet") -> bool:
        return not self.bits & ~other.bits

    def max(self) -> int:
        return self.bits.bit_length() - 1

    def to_tuple(self) -> tuple[int, ...]:
        return elements_of(self.bits)

    def __repr__(self) -> str:
        return f"VertexSet({list(self)})"

    def __str__(self) -> str:
        return "(" + ",".join(map(str, self)) + ")"


def vset(*elements: int) -> VertexSet:
    """Shorthand: ``vset(1, 2, 3)``."""
    return VertexSet(elements)


class Family:
    """A deduplicated collection of vertex sets over the ground set ``[n]``.

    ``uniform_k`` is the common cardinality of a k-uniform family and
    ``None`` for mixed-size families such as traces.
    """

    __slots__ = ("n", "uniform_k", "_masks", "_index")

    def __init__(
        self,
        n: int,
        members: Iterable[VertexSet | Iterable[int] | int] = (),
        uniform_k: Optional[int] = None,
    ) -> None:
        if n < 0:
            raise ValueError("ground set size must be non-negative")
        masks = set()
        limit = 1 << (n + 1)
        for m in members:
            if isinstance(m, VertexSet):
                b = m.bits
            elif isinstance(m, int):
                b = m
            else:
                b = bits_of(m)
            if b >= limit or b & 1:
                raise ValueError(f"member {elements_of(b)} not inside [{n}]")
            if uniform_k is not None and popcount(b) != uniform_k:
                raise ValueError(
                    f"member {elements_of(b)} has size {popcount(b)}, expected {uniform_k}"
                )
            masks.add(b)
        self.n = n
        self.uniform_k = uniform_k
        self._masks: tuple[int, ...] = tuple(sorted(masks, key=sort_key))
        self._index = frozenset(self._masks)

    @classmethod
    def uniform(cls, n: int, k: int, members: Iterable = ()) -> "Family":
        return cls(n, members, uniform_k=k)

    @property
    def masks(self) -> tuple[int, ...]:
        """Member bitmasks in canonical order."""
        return self._masks

    @property
    def members(self) -> tuple[VertexSet, ...]:
        return tuple(VertexSet.from_bits(b) for b in self._masks)

    def __iter__(self) -> Iterator[VertexSet]:
        return (VertexSet.from_bits(b) for b in self._masks)

    def __len__(self) -> int:
        return len(self._masks)

    def __contains__(self, item: object) -> bool:
        if isinstance(item, VertexSet):
            return item.bits in self._index
        if isinstance(item, int):
            return item in self._index
        try:
            return bits_of(item) in self._index  # type: ignore[arg-type]
        except TypeError:
            return False

    def contains_mask(self, mask: int) -> bool:
        return mask in self._index

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, Family)
            and self.n == other.n
            and self._index == other._index
        )

    def __hash__(self) -> int:
        return hash((self.n, self._index))

    def __repr__(self) -> str:
        k = "" if self.uniform_k is None else f", k={self.uniform_k}"
        return f"Family(n={self.n}{k}, size={len(self)})"

    def sizes(self) -> dict[int, int]:
        out: dict[int, int] = {}
        for b in self._masks:
            c = popcount(b)
            out[c] = out.get(c, 0) + 1
        return out

    def with_masks(self, masks: Iterable[int], uniform_k: Optional[int] = -1) -> "Family":
        k = self.uniform_k if uniform_k == -1 else uniform_k
        return Family(self.n, masks, uniform_k=k)

    def union(self, other: "Family") -> "Family":
        k = self.uniform_k if self.uniform_k == other.uniform_k else None
        return Family(max(self.n, other.n), self._masks + other._masks, uniform_k=k)

    def avoiding(self, v: int) -> "Family":
        """Members not containing ``v``."""
        bit = 1 << v
        return self.with_masks(b for b in self._masks if not b & bit)

    def containing(self, v: int) -> "Family":
        bit = 1 << v
        return self.with_masks(b for b in self._masks if b & bit)

    def link(self, v: int) -> "Family":
        """``{H - {v} : v in H}``; not uniform-k in general."""
        bit = 1 << v
        k = None if self.uniform_k is None else self.uniform_k - 1
        return Family(self.n, (b & ~bit for b in self._masks if b & bit), uniform_k=k)

    def inside(self, mask: int) -> "Family":
        """Members contained in the vertex mask."""
        return self.with_masks(b for b in self._masks if not b & ~mask)


@dataclass(frozen=True)
class MatchingWitness:
    """Pairwise disjoint members realising a matching."""

    edges: tuple[VertexSet, ...]

    def __post_init__(self) -> None:
        seen = 0
        for e in self.edges:
            if e.bits & seen:
                raise ValueError("witness edges are not pairwise disjoint")
            seen |= e.bits

    def __len__(self) -> int:
        return len(self.edges)

    def is_in(self, fam: Family) -> bool:
        return all(e in fam for e in self.edges)


# --------------------------------------------------------------------------
# exact matching number
# --------------------------------------------------------------------------


class _MatchingOracle:
    """Decides ``has a matching of size >= need`` inside a vertex mask.

    Branches on the lowest vertex covered by a usable edge: either that
    vertex stays unmatched or one of the usable edges through it is taken.
    Negative answers are memoised per (mask, need).
    """

    __slots__ = ("edges", "min_size", "_memo")

    def __init__(self, edges: Sequence[int]) -> None:
        self.edges = tuple(e for e in edges if e)
        self.min_size = min((popcount(e) for e in self.edges), default=1)
        self._memo: set[tuple[int, int]] = set()

    def has(self, need: int, avail: int = -1) -> bool:
        if need <= 0:
            return True
        return self._has(avail, need)

    def _has(self, avail: int, need: int) -> bool:
        if (avail, need) in self._memo:
            return False
        usable = [e for e in self.edges if not e & ~avail]
        if len(usable) < need:
            self._memo.add((avail, need))
            return False
        if need == 1:
            return True
        support = 0
        for e in usable:
            support |= e
        if popcount(support) < need * self.min_size:
            self._memo.add((avail, need))
            return False
        low = support & -support
        for e in usable:
            if e & low and self._has(avail & ~e, need - 1):
                return True
        # the lowest vertex stays unmatched
        if self._has(avail & ~low & support, need):
            return True
        self._memo.add((avail, need))
        return False

    def size(self, lower: int = 0) -> int:
        nu = max(lower, 1 if self.edges else 0)
        while self.has(nu + 1):
            nu += 1
        return nu


def _greedy(edges: Sequence[int]) -> int:
    used = 0
    count = 0
    for e in edges:
        if not e & used:
            used |= e
            count += 1
    return count


def matching_size(edges: Sequence[int], cap: Optional[int] = None) -> int:
    """Exact matching number of a list of bitmasks, optionally capped."""
    oracle = _MatchingOracle(edges)
    if not oracle.edges:
        return 0
    nu = _greedy(oracle.edges)
    while (cap is None or nu < cap) and oracle.has(nu + 1):
        nu += 1
    return nu if cap is None else min(nu, cap)


def has_matching(edges: Sequence[int], size: int, avoid: int = 0) -> bool:
    """True iff ``size`` pairwise disjoint edges avoid the vertex mask ``avoid``."""
    if size <= 0:
        return True
    usable = [e for e in edges if not e & avoid]
    if _greedy(usable) >= size:
        return True
    return _MatchingOracle(usable).has(size)


def matching_number(fam: Family) -> tuple[int, MatchingWitness]:
    """Maximum number of pairwise disjoint members, with a canonical witness.

    The witness is the lexicographically least maximum matching when edges
    are listed in family order.
    """
    masks = fam.masks
    nu = matching_size(masks)
    chosen: list[int] = []
    used = 0
    start = 0
    for depth in range(nu):
        rest = nu - depth - 1
        for idx in range(start, len(masks)):
            e = masks[idx]
            if e & used:
                continue
            tail = [f for f in masks[idx + 1:] if not f & (used | e)]
            if has_matching(tail, rest):
                chosen.append(e)
                used |= e
                start = idx + 1
                break
        else:  # pragma: no cover - the oracle guarantees a completion
            raise RuntimeError("matching witness reconstruction failed")
    return nu, MatchingWitness(tuple(VertexSet.from_bits(b) for b in chosen))


# --------------------------------------------------------------------------
# dominance order and stability
# --------------------------------------------------------------------------


def dominates(g: VertexSet, f: VertexSet) -> bool:
    """``g << f``: the i-th smallest element of g is at most that of f, for all i."""
    if len(g) != len(f):
        raise ValueError("incomparable cardinalities")
    return all(a <= b for a, b in zip(g, f))


def mask_dominates(g: int, f: int) -> bool:
    ge, fe = elements_of(g), elements_of(f)
    return len(ge) == len(fe) and all(a <= b for a, b in zip(ge, fe))


def elementary_predecessors(mask: int) -> Iterator[int]:
    """Sets obtained by lowering one element by one; they generate ``<<``."""
    for x in elements_of(mask):
        if x > 1 and not mask >> (x - 1) & 1:
            yield mask ^ (1 << x) ^ (1 << (x - 1))


def is_stable(fam: Family) -> tuple[bool, Optional[tuple[VertexSet, VertexSet]]]:
    """Check that the family is a down-set of ``<<`` within each cardinality.

    Returns ``(True, None)`` or ``(False, (G, F))`` with ``G << F``,
    ``F`` a member and ``G`` missing.
    """
    for f in fam.masks:
        for g in elementary_predecessors(f):
            if not fam.contains_mask(g):
                return False, (VertexSet.from_bits(g), VertexSet.from_bits(f))
    return True, None


def down_closure(masks: Iterable[int]) -> set[int]:
    """All sets ``G`` with ``G << F`` for some given ``F``."""
    out: set[int] = set()
    stack = list(masks)
    while stack:
        m = stack.pop()
        if m in out:
            continue
        out.add(m)
        stack.extend(g for g in elementary_predecessors(m) if g not in out)
    return out
