"""The (i, j)-shift and stabilisation to a stable family."""

from __future__ import annotations

from dataclasses import dataclass, field

from .core import Family, elements_of


@dataclass
class ShiftLog:
    """Record of the shifts that actually moved something, in order."""

    steps: list[tuple[int, int, int]] = field(default_factory=list)

    def record(self, i: int, j: int, moved: int) -> None:
        if not i < j:
            raise ValueError("invalid shift direction")
        if moved < 1:
            raise ValueError("only effective shifts are logged")
        self.steps.append((i, j, moved))

    def __len__(self) -> int:
        return len(self.steps)


def potential(fam: Family) -> int:
    """Sum of all elements of all members; every effective shift lowers it."""
    return sum(sum(elements_of(b)) for b in fam.masks)


def _shift_masks(masks: tuple[int, ...], i: int, j: int) -> tuple[list[int], int]:
    bi, bj = 1 << i, 1 << j
    present = set(masks)
    out = []
    moved = 0
    for b in masks:
        if b & bj and not b & bi:
            c = b ^ bj ^ bi
            if c not in present:
                out.append(c)
                moved += 1
                continue
        out.append(b)
    return out, moved


def shift(fam: Family, i: int, j: int) -> Family:
    """Replace ``j`` by ``i`` in every member where this creates no duplicate."""
    if i >= j:
        raise ValueError("invalid shift direction")
    if i < 1 or j > fam.n:
        raise ValueError(f"shift ({i},{j}) outside [{fam.n}]")
    out, _ = _shift_masks(fam.masks, i, j)
    return fam.with_masks(out)


def stabilize(fam: Family) -> tuple[Family, ShiftLog]:
    """Shift until stable.

    Pairs are visited in lexicographic order and the scan restarts from
    ``(1, 2)`` after any effective shift.
    """
    log = ShiftLog()
    masks = fam.masks
    n = fam.n
    restart = True
    while restart:
        restart = False
        for i in range(1, n + 1):
            for j in range(i + 1, n + 1):
                out, moved = _shift_masks(masks, i, j)
                if moved:
                    log.record(i, j, moved)
                    masks = tuple(out)
                    restart = True
                    break
            if restart:
                break
    return fam.with_masks(masks), log
