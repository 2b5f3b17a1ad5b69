"""Extremal constructions ``A_l(n)`` and the closed-form bounds around them.

``A_l(n)`` is the family of k-subsets of ``[n]`` meeting ``[l*s + l - 1]`` in
at least ``l`` vertices.  ``l = 1`` gives the cover construction ``A_1(n)``
(all k-sets meeting ``[s]``) and ``l = k`` gives the clique ``A_k`` on
``k*s + k - 1`` vertices.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from math import comb

from .core import Family, bits_of


@dataclass(frozen=True)
class ExtremalSpec:
    n: int
    k: int
    s: int
    ell: int

    def __post_init__(self) -> None:
        if self.k < 1 or self.s < 1 or not 1 <= self.ell <= self.k:
            raise ValueError("parameters out of range")
        if self.n < self.core_size or self.n < self.k:
            raise ValueError("parameters out of range")

    @property
    def core_size(self) -> int:
        """``l*s + l - 1``: the vertex block a member must hit ``l`` times."""
        return self.ell * self.s + self.ell - 1


def build_A(spec: ExtremalSpec) -> Family:
    core = bits_of(range(1, spec.core_size + 1))
    members = []
    for combo in combinations(range(1, spec.n + 1), spec.k):
        m = bits_of(combo)
        if bin(m & core).count("1") >= spec.ell:
            members.append(m)
    return Family(spec.n, members, uniform_k=spec.k)


def size_A(spec: ExtremalSpec) -> int:
    c = spec.core_size
    return sum(comb(c, t) * comb(spec.n - c, spec.k - t) for t in range(spec.ell, spec.k + 1))


def clique_size(k: int, s: int) -> int:
    """``|A_k| = C(ks + k - 1, k)``."""
    return comb(k * s + k - 1, k)


def cover_size(n: int, k: int, s: int) -> int:
    """``|A_1(n)| = C(n, k) - C(n - s, k)``."""
    return comb(n, k) - comb(n - s, k)


def conjectured_max(n: int, k: int, s: int) -> int:
    return max(clique_size(k, s), cover_size(n, k, s))


def pivotal(s: int, k: int) -> int:
    """Least ``n >= ks + k - 1`` where the cover construction catches up with the clique.

    ``|A_1(n)|`` grows with n, so the threshold is found by bisection below
    the cap ``(k + 1)(s + 1)``, where the cover construction is already larger.
    """
    if s < 1 or k < 2:
        raise ValueError("parameters out of range")
    target = clique_size(k, s)
    lo, hi = k * s + k - 1, (k + 1) * (s + 1)
    if cover_size(hi, k, s) < target:
        raise AssertionError(f"no pivotal number below {hi} for s={s}, k={k}")
    while lo < hi:
        mid = (lo + hi) // 2
        if cover_size(mid, k, s) >= target:
            hi = mid
        else:
            lo = mid + 1
    return lo


def erdos_gallai_max(n: int, s: int) -> int:
    """Maximum number of edges of a graph on ``n`` vertices with matching number ``s``."""
    if n < 3 * s:
        raise ValueError("formula valid only for n >= 3s")
    return comb(n, 2) - comb(n - s, 2)


def general_upper_bound(n: int, k: int, s: int) -> int:
    """``s * C(n-1, k-1)``, valid for ``n >= k(s+1)``."""
    if n < k * (s + 1):
        raise ValueError("bound requires n >= k(s+1)")
    return s * comb(n - 1, k - 1)
