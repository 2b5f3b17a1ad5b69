"""Plain-text family format (``.hyp``).

The first non-comment line holds ``n``; every further non-empty line is one
member written as space-separated increasing vertices.  Lines starting with
``#`` are comments.  ``format_hyp`` emits the canonical form, so
``format_hyp(parse_hyp(text)) == text`` for canonical input.
"""

from __future__ import annotations

import os
from typing import Optional

from .core import Family, elements_of


def parse_hyp(text: str, uniform_k: Optional[int] = None) -> Family:
    n: Optional[int] = None
    members: list[tuple[int, ...]] = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if n is None:
            try:
                n = int(line)
            except ValueError:
                raise ValueError(f"line {lineno}: expected ground set size, got {line!r}")
            continue
        try:
            verts = tuple(int(tok) for tok in line.split())
        except ValueError:
            raise ValueError(f"line {lineno}: non-integer vertex in {line!r}")
        if any(b <= a for a, b in zip(verts, verts[1:])):
            raise ValueError(f"line {lineno}: vertices must be strictly increasing")
        members.append(verts)
    if n is None:
        raise ValueError("missing ground set size")
    if uniform_k is None and members:
        sizes = {len(m) for m in members}
        if len(sizes) == 1:
            uniform_k = sizes.pop()
    return Family(n, members, uniform_k=uniform_k)


def format_hyp(fam: Family) -> str:
    lines = [str(fam.n)]
    lines.extend(" ".join(map(str, elements_of(b))) for b in fam.masks)
    return "\n".join(lines) + "\n"


def load_hyp(path: str | os.PathLike, uniform_k: Optional[int] = None) -> Family:
    with open(path, encoding="utf-8") as fh:
        return parse_hyp(fh.read(), uniform_k=uniform_k)


def save_hyp(fam: Family, path: str | os.PathLike) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(format_hyp(fam))
