"""First-Fit Decreasing and Best-Fit Decreasing bin packing."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

from .core import DomainError, InputItem, id_key


@dataclass(frozen=True)
class Bin:
    id: int
    capacity: int
    contents: tuple[str, ...]
    load: int


@dataclass(frozen=True)
class Packing:
    bins: tuple[Bin, ...]
    bin_capacity: int

    def groups(self) -> list[tuple[str, ...]]:
        return [b.contents for b in self.bins]

    def __len__(self):
        return len(self.bins)


def _sorted_items(items: Iterable[InputItem], cap: int) -> list[InputItem]:
    items = list(items)
    for it in items:
        if it.size > cap:
            raise DomainError(f"input {it.id!r} of size {it.size} exceeds bin capacity {cap}")
    return sorted(items, key=lambda it: (-it.size, id_key(it.id)))


def _finish(contents: list[list[str]], loads: list[int], cap: int) -> Packing:
    bins = tuple(Bin(i, cap, tuple(c), ld) for i, (c, ld) in enumerate(zip(contents, loads)))
    return Packing(bins, cap)


def ffd_pack(items: Iterable[InputItem], bin_capacity: int) -> Packing:
    """Largest first; each item goes to the lowest-numbered bin with room."""
    if bin_capacity < 0:
        raise DomainError("bin capacity must be non-negative")
    contents: list[list[str]] = []
    loads: list[int] = []
    for it in _sorted_items(items, bin_capacity):
        for b, load in enumerate(loads):
            if load + it.size <= bin_capacity:
                contents[b].append(it.id)
                loads[b] += it.size
                break
        else:
            contents.append([it.id])
            loads.append(it.size)
    return _finish(contents, loads, bin_capacity)


def bfd_pack(items: Iterable[InputItem], bin_capacity: int) -> Packing:
    """Largest first; each item goes to the fullest bin that still has room."""
    if bin_capacity < 0:
        raise DomainError("bin capacity must be non-negative")
    contents: list[list[str]] = []
    loads: list[int] = []
    for it in _sorted_items(items, bin_capacity):
        best = -1
        for b, load in enumerate(loads):
            if load + it.size <= bin_capacity and (best < 0 or load > loads[best]):
                best = b
        if best < 0:
            contents.append([it.id])
            loads.append(it.size)
        else:
            contents[best].append(it.id)
            loads[best] += it.size
    return _finish(contents, loads, bin_capacity)


def half_full_violations(packing: Packing) -> int:
    """Number of bins whose load is below half the bin capacity."""
    return sum(1 for b in packing.bins if 2 * b.load < packing.bin_capacity)
