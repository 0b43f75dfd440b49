"""Exhaustive optimal search for tiny instances and NP-hardness reduction generators."""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations
from typing import Sequence

from .core import DomainError, InputItem, Instance, MappingSchema, ProblemKind


@dataclass(frozen=True)
class OracleResult:
    optimal_reducers: int | None
    optimal_cost: int | None
    witness: MappingSchema | None
    exhausted: bool


@dataclass(frozen=True)
class PartitionInstance:
    numbers: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "numbers", tuple(self.numbers))
        if any(n <= 0 for n in self.numbers):
            raise DomainError("partition numbers must be positive")

    @property
    def total(self) -> int:
        return sum(self.numbers)


def has_equal_bipartition(numbers: Sequence[int]) -> bool:
    """Direct subset enumeration."""
    total = sum(numbers)
    if total % 2:
        return False
    n = len(numbers)
    return any(sum(numbers[i] for i in range(n) if mask >> i & 1) * 2 == total
               for mask in range(1 << n))


def _search(sizes: list[int], q: int, pairs: list[tuple[int, int]], valid, max_reducers: int):
    """Lexicographic minimum of (reducers, cost, canonical form) over covers of ``pairs``.

    Reducers are subsets (bitmasks) of inputs with load <= q accepted by ``valid``.
    Each step picks a subset holding the lowest uncovered pair, so every cover is
    reachable.  The reducer count is found first by iterative deepening over
    maximal subsets only; the cost is then minimised at that count, visiting only
    branches that can still be completed.  Prunes: pair capacity of the remaining
    reducers and per-input replication needs.
    """
    n = len(sizes)
    loads = [0] * (1 << n)
    for mask in range(1, 1 << n):
        low = mask & -mask
        loads[mask] = loads[mask ^ low] + sizes[low.bit_length() - 1]
    pair_bit = {p: 1 << k for k, p in enumerate(pairs)}
    covers = {}
    for s in range(1, 1 << n):
        if loads[s] > q or bin(s).count("1") < 2 or not valid(s):
            continue
        c = 0
        for (a, b), bit in pair_bit.items():
            if s >> a & 1 and s >> b & 1:
                c |= bit
        if c:
            covers[s] = c
    # a subset is dominated for coverage when adding one input keeps it valid and covers more
    maximal = {s for s in covers
               if not any(s | (1 << v) in covers and covers[s | (1 << v)] != covers[s]
                          for v in range(n) if not s >> v & 1)}
    cand_all, cand_max = [], []
    for a, b in pairs:
        opts = [s for s in covers if s >> a & 1 and s >> b & 1]
        opts.sort(key=lambda s: (-bin(covers[s]).count("1"), loads[s], s))
        cand_all.append(opts)
        cand_max.append([s for s in opts if s in maximal])
    max_pairs = max((bin(c).count("1") for c in covers.values()), default=0)
    partners = [[(b if a == v else a, pair_bit[(a, b)]) for (a, b) in pairs if v in (a, b)]
                for v in range(n)]

    def prunable(unc: int, budget: int) -> bool:
        if budget == 0 or bin(unc).count("1") > budget * max_pairs:
            return True
        total = 0
        for v in range(n):
            other = [u for u, bit in partners[v] if unc & bit]
            if not other:
                continue
            room = q - sizes[v]
            need = max(1, -(-sum(sizes[u] for u in other) // room)) if room > 0 else 1
            if need > budget:
                return True
            total += need * sizes[v]
        return total > budget * q

    @lru_cache(maxsize=None)
    def feasible(unc: int, budget: int) -> bool:
        if not unc:
            return True
        if prunable(unc, budget):
            return False
        low = (unc & -unc).bit_length() - 1
        return any(feasible(unc & ~covers[s], budget - 1) for s in cand_max[low])

    def canon(masks) -> tuple:
        return tuple(sorted(tuple(i for i in range(n) if m >> i & 1) for m in masks))

    @lru_cache(maxsize=None)
    def cheapest(unc: int, budget: int):
        if not unc:
            return (0, ())
        low = (unc & -unc).bit_length() - 1
        result = None
        for s in cand_all[low]:
            rest = unc & ~covers[s]
            if not feasible(rest, budget - 1):
                continue
            cost, chosen = cheapest(rest, budget - 1)
            key = (cost + loads[s], canon(chosen + (s,)))
            if result is None or key < result[0]:
                result = (key, chosen + (s,))
        return (result[0][0], result[1])

    full = (1 << len(pairs)) - 1
    out = None
    for budget in range(0, max_reducers + 1):
        if feasible(full, budget):
            # the exact count is the smallest number of reducers actually used
            cost, chosen = cheapest(full, budget)
            out = (len(chosen), cost, chosen)
            break
    feasible.cache_clear()
    cheapest.cache_clear()
    return out, canon


def _result(instance: Instance, ids: list[str], out, canon) -> OracleResult:
    if out is None:
        return OracleResult(None, None, None, True)
    cnt, cost, chosen = out
    groups = [tuple(ids[i] for i in red) for red in canon(chosen)]
    witness = MappingSchema.from_groups(groups, instance.sizes())
    return OracleResult(cnt, cost, witness, False)


def brute_force_a2a(instance: Instance, max_reducers: int) -> OracleResult:
    """Fewest reducers (then least cost) covering every pair, within ``max_reducers``."""
    if instance.kind is not ProblemKind.A2A:
        raise DomainError("brute_force_a2a needs an A2A instance")
    ids = [it.id for it in instance.inputs]
    sizes = [it.size for it in instance.inputs]
    pairs = list(combinations(range(len(ids)), 2))
    out, canon = _search(sizes, instance.capacity, pairs, lambda s: True, max_reducers)
    return _result(instance, ids, out, canon)


def brute_force_x2y(instance: Instance, max_reducers: int) -> OracleResult:
    if instance.kind is not ProblemKind.X2Y:
        raise DomainError("brute_force_x2y needs an X2Y instance")
    items = list(instance.inputs) + list(instance.y_inputs)
    nx = len(instance.inputs)
    ids = [it.id for it in items]
    sizes = [it.size for it in items]
    xmask = (1 << nx) - 1
    pairs = [(a, b) for a in range(nx) for b in range(nx, len(items))]
    out, canon = _search(sizes, instance.capacity, pairs,
                         lambda s: bool(s & xmask) and bool(s & ~xmask), max_reducers)
    return _result(instance, ids, out, canon)


def _reduction_numbers(p: PartitionInstance) -> tuple[tuple[int, ...], bool]:
    """Numbers to encode and whether the instance is trivially a no-instance.

    An odd total has no equal split, and neither does the doubled set, which keeps
    every constructed size integral.
    """
    if p.total % 2:
        return tuple(2 * n for n in p.numbers), True
    return p.numbers, False


def partition_to_a2a(p: PartitionInstance, z: int) -> Instance:
    """Partition instance -> A2A instance solvable with z reducers iff the numbers split evenly."""
    if z < 3:
        raise DomainError(f"z must be at least 3, got {z}")
    numbers, trivially_no = _reduction_numbers(p)
    s = sum(numbers)
    items = [InputItem(f"n{i}", v) for i, v in enumerate(numbers, start=1)]
    items += [InputItem(f"medium{i}", s // 2) for i in range(1, z - 2)]
    items.append(InputItem("big", (z - 2) * s // 2))
    meta = {"reduction": "a2a", "budget": z, "numbers": list(p.numbers), "trivially_no": trivially_no}
    return Instance((z - 1) * s // 2, ProblemKind.A2A, tuple(items), metadata=meta)


def partition_to_x2y(p: PartitionInstance, z: int) -> Instance:
    """Partition instance -> X2Y instance solvable with z reducers iff the numbers split evenly."""
    if z < 2:
        raise DomainError(f"z must be at least 2, got {z}")
    numbers, trivially_no = _reduction_numbers(p)
    s = sum(numbers)
    q = 1 + s // 2
    # a number above s/2 can never meet the small input; clamping it to q keeps that true
    trivially_no = trivially_no or any(2 * v > s for v in numbers)
    xs = [InputItem(f"n{i}", min(v, q)) for i, v in enumerate(numbers, start=1)]
    xs += [InputItem(f"big{i}", s // 2) for i in range(1, z - 1)]
    meta = {"reduction": "x2y", "budget": z, "numbers": list(p.numbers), "trivially_no": trivially_no}
    return Instance(q, ProblemKind.X2Y, tuple(xs), (InputItem("small", 1),), metadata=meta)


def optimal_bin_count(sizes: Sequence[int], capacity: int) -> int:
    """Minimum number of bins, by exhaustive search (small inputs only)."""
    items = sorted(sizes, reverse=True)
    if any(w > capacity for w in items):
        raise DomainError("an item exceeds the bin capacity")
    best = [len(items)]

    def place(i: int, loads: list[int]) -> None:
        if len(loads) >= best[0]:
            return
        if i == len(items):
            best[0] = len(loads)
            return
        seen = set()
        for b, load in enumerate(loads):
            if load + items[i] <= capacity and load not in seen:
                seen.add(load)
                loads[b] += items[i]
                place(i + 1, loads)
                loads[b] -= items[i]
        loads.append(items[i])
        place(i + 1, loads)
        loads.pop()

    if items:
        place(0, [])
    else:
        best[0] = 0
    return best[0]
