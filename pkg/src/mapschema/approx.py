"""Approximation algorithms for inputs of different sizes, and strategy dispatch.

Most constructions pack inputs into bins, treat each bin as one unit input and
reuse the team constructions from ``equal`` on the bins.  Internally a token is
a tuple of input ids (a bin); ``None`` marks a dummy slot.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from itertools import combinations
from typing import Iterable, Sequence

from .binpack import ffd_pack
from .core import (DomainError, InfeasibleInstanceError, InfeasibleStrategyError, InputItem,
                   Instance, MappingSchema, NoDecompositionError, ProblemKind, WrongStrategyError,
                   unit_instance)
from .equal import (au_teams, is_prime, next_pow2, odd_capacity_teams, pair_group_teams,
                    q2_teams, strip_dummies)


class Strategy(str, Enum):
    BINPACK_PAIRS = "BinPackPairs"
    ALG1A = "Alg1A"
    ALG1B = "Alg1B"
    ALG2 = "Alg2"
    ALG3 = "Alg3"
    ALG4 = "Alg4"
    BIG_INPUT = "BigInput"
    X2Y = "X2Y"
    AU = "AU"
    Q2 = "Q2"
    Q3 = "Q3"


@dataclass(frozen=True)
class StrategyChoice:
    name: Strategy
    parameters: dict = field(default_factory=dict)


@dataclass(frozen=True)
class PrimeDecomposition:
    p: int
    l: int

    def __post_init__(self):
        if not is_prime(self.p):
            raise DomainError(f"p={self.p} is not prime")
        if self.l < 0:
            raise DomainError("l must be non-negative")

    @property
    def q(self) -> int:
        return self.p + self.l


# ---------------------------------------------------------------- helpers

def _require_a2a(instance: Instance) -> None:
    if instance.kind is not ProblemKind.A2A:
        raise WrongStrategyError("this strategy solves A2A instances only")


def _pack(items: Iterable[InputItem], cap: int) -> list[tuple[str, ...]]:
    return ffd_pack(items, cap).groups()


def _flatten(red) -> tuple[str, ...]:
    return tuple(i for tok in red if tok is not None for i in tok)


def _emit(instance: Instance, teams=None, groups=None) -> MappingSchema:
    """Build a schema from token reducers; reducers with fewer than two inputs cover
    nothing and are dropped."""
    sizes = instance.sizes()
    if teams is not None:
        flat = [[r for r in (_flatten(red) for red in team) if len(r) >= 2] for team in teams]
        return MappingSchema.from_teams([t for t in flat if t], sizes)
    flat = [r for r in (_flatten(red) for red in groups or ()) if len(r) >= 2]
    return MappingSchema.from_groups(flat, sizes)


def _units(instance: Instance) -> list[tuple[str, ...]]:
    return [(it.id,) for it in instance.inputs]


def _check_fits(instance: Instance, k: int) -> None:
    q = instance.capacity
    for it in instance.inputs:
        if it.size * k > q:
            raise WrongStrategyError(f"input {it.id!r} of size {it.size} exceeds q/{k}")


def _check_k(q: int, k: int) -> None:
    if q % k:
        raise DomainError(f"k={k} must divide q={q}")


def _equal_capacity(instance: Instance) -> tuple[int, int]:
    """(w, q // w) for an instance of equal positive sizes."""
    w = instance.equal_size()
    if not w:
        raise WrongStrategyError("strategy needs inputs of one common positive size")
    return w, instance.capacity // w


def _pairs_of_bins(bins: Sequence) -> list[tuple]:
    if len(bins) == 1:
        return [(bins[0],)]
    return list(combinations(bins, 2))


def cover_capacity3(tokens: Sequence) -> list[list[tuple]]:
    """Cover all pairs of unit tokens with reducers of three tokens.

    Nine tokens use the prime square, 3^l tokens the recursive prime-power
    construction, anything else the capacity-3 A/B recursion.
    """
    z = len(tokens)
    if z <= 3:
        return [[tuple(tokens)]] if z else []
    if z == 9:
        return au_teams([tokens[3 * i:3 * i + 3] for i in range(3)])
    l = _exact_log(z, 3)
    if l is not None and l > 2:
        return _alg3_teams(list(tokens), 3, l)
    return odd_capacity_teams(list(tokens), 3)


def _exact_log(n: int, base: int) -> int | None:
    l, v = 0, 1
    while v < n:
        v *= base
        l += 1
    return l if v == n else None


# ---------------------------------------------------------------- strategies

def binpack_pairs_schema(instance: Instance) -> MappingSchema:
    """Pack into bins of q/2 and give every pair of bins its own reducer."""
    _require_a2a(instance)
    q = instance.capacity
    for it in instance.inputs:
        if 2 * it.size > q:
            raise WrongStrategyError(
                f"input {it.id!r} is bigger than q/2; use big_input_schema")
    bins = _pack(instance.inputs, q // 2)
    if not bins:
        return MappingSchema(())
    return _emit(instance, groups=_pairs_of_bins(bins))


def alg1a(instance: Instance, k: int) -> MappingSchema:
    """Bins of q/k (k odd > 3) treated as unit inputs with capacity k, two-step teams."""
    _require_a2a(instance)
    if k % 2 == 0:
        raise WrongStrategyError(f"k={k} is even; use alg1b")
    if k <= 3:
        raise DomainError(f"alg1a needs odd k > 3, got {k}")
    _check_k(instance.capacity, k)
    _check_fits(instance, k)
    bins = _pack(instance.inputs, instance.capacity // k)
    return _emit(instance, teams=odd_capacity_teams(bins, k, spill=True))


def alg1b(instance: Instance, k: int) -> MappingSchema:
    """Bins of q/k (k even >= 4); derived inputs of k/2 bins paired by round-robin teams."""
    _require_a2a(instance)
    if k % 2:
        raise WrongStrategyError(f"k={k} is odd; use alg1a")
    if k < 4:
        raise DomainError(f"alg1b needs even k >= 4, got {k}")
    _check_k(instance.capacity, k)
    _check_fits(instance, k)
    bins = _pack(instance.inputs, instance.capacity // k)
    return _emit(instance, teams=pair_group_teams(bins, k // 2))


def nearest_prime_decomposition(q: int, m: int) -> PrimeDecomposition:
    """Largest prime p <= q with p^2 + (q - p)(p + 1) <= m."""
    if q < 3:
        raise DomainError(f"decomposition needs q >= 3, got {q}")
    for p in range(q, 1, -1):
        if is_prime(p) and p * p + (q - p) * (p + 1) <= m:
            return PrimeDecomposition(p, q - p)
    raise NoDecompositionError(f"no prime p <= {q} with p^2 + (q-p)(p+1) <= {m}")


def _cover_units(tokens: list, cap: int) -> list[list[tuple]]:
    """All pairs among unit tokens at capacity cap, two-step construction by parity."""
    if len(tokens) <= cap:
        return [[tuple(tokens)]] if len(tokens) >= 2 else []
    if cap % 2:
        return odd_capacity_teams(tokens, cap, spill=True)
    return pair_group_teams(tokens, cap // 2)


def alg2(instance: Instance, decomposition: PrimeDecomposition) -> MappingSchema:
    """Prime square on the first p^2 inputs; the rest ride along l at a time, one chunk per team."""
    _require_a2a(instance)
    w, cap = _equal_capacity(instance)
    p, l = decomposition.p, decomposition.l
    if p + l != cap:
        raise DomainError(f"p + l = {p + l} does not match the capacity {cap}")
    tokens = _units(instance)
    square = tokens[:p * p] + [None] * max(0, p * p - len(tokens))
    rest = tokens[p * p:]
    chunks = [rest[i:i + l] for i in range(0, len(rest), l)] if l else []
    if rest and (not l or len(chunks) > p + 1):
        raise InfeasibleStrategyError(
            f"{len(rest)} leftover inputs do not fit {p + 1} teams of spare capacity {l}")
    grid = [square[p * i:p * i + p] for i in range(p)]
    teams = au_teams(grid)
    for t, chunk in enumerate(chunks):
        teams[t] = [red + tuple(chunk) for red in teams[t]]
    teams = strip_dummies(teams) + _cover_units(rest, cap)
    return _emit(instance, teams=teams)


def assignment_tree(q: int, l: int) -> list[list[list[list[tuple[int, int]]]]]:
    """Levels 1..l-1 of the recursive prime-power layout over q^l inputs.

    A node is a q x q matrix of blocks ``(start, size)`` of consecutive input
    indices.  The root's cells are blocks of q^(l-2) inputs.  Each node applies
    the prime-square rule; every resulting reducer of q blocks becomes a child
    matrix whose column t lists the q sub-blocks of block t.  Cells of level
    l-1 are single inputs and the columns there are input columns.
    """
    if not is_prime(q):
        raise DomainError(f"q={q} is not prime")
    if l <= 2:
        raise DomainError(f"l must exceed 2 (l=2 is the plain prime square), got {l}")
    size = q ** (l - 2)
    root = [[(size * (q * j + i), size) for j in range(q)] for i in range(q)]
    levels = [[root]]
    while levels[-1][0][0][0][1] > 1:
        children = []
        for node in levels[-1]:
            for team in au_teams(node):
                for red in team:
                    children.append([[(start + i * (sz // q), sz // q) for start, sz in red]
                                     for i in range(q)])
        levels.append(children)
    return levels


def _alg3_teams(tokens: list, q: int, l: int) -> list[list[tuple]]:
    teams = []
    for node in assignment_tree(q, l)[-1]:
        grid = [[tokens[start] for start, _ in row] for row in node]
        teams.extend(au_teams(grid))
    return strip_dummies(teams)


def alg3(q: int, l: int, instance: Instance | None = None) -> MappingSchema:
    """Recursive prime-power construction for q^l unit inputs (ids '1'..'q^l').

    With an equal-size ``instance`` of at most q^l inputs and effective capacity q,
    its inputs fill the first slots and the rest are dummies.
    """
    if not is_prime(q):
        raise DomainError(f"q={q} is not prime")
    if l <= 2:
        raise DomainError(f"l must exceed 2, got {l}; use au_schema")
    if instance is None:
        instance = unit_instance(q ** l, q)
    _require_a2a(instance)
    _, cap = _equal_capacity(instance)
    if cap < q:
        raise WrongStrategyError(f"effective capacity {cap} is below q={q}")
    if instance.m > q ** l:
        raise WrongStrategyError(f"{instance.m} inputs exceed q^l = {q ** l}")
    tokens = _units(instance) + [None] * (q ** l - instance.m)
    return _emit(instance, teams=_alg3_teams(tokens, q, l))


def alg4_hybrid(instance: Instance) -> MappingSchema:
    """Inputs above q/3 get bins of their own; smaller ones are binned twice (q/2 and q/3)."""
    _require_a2a(instance)
    q = instance.capacity
    for it in instance.inputs:
        if 2 * it.size > q:
            raise WrongStrategyError(f"input {it.id!r} is bigger than q/2; use big_input_schema")
    big_items = [it for it in instance.inputs if 3 * it.size > q]
    small_items = [it for it in instance.inputs if 3 * it.size <= q]
    big = _pack(big_items, q // 2)
    medium = _pack(small_items, q // 2)
    small = _pack(small_items, q // 3)
    groups = list(combinations(big, 2))
    groups += [(b, md) for b in big for md in medium]
    groups += [red for team in cover_capacity3(small) for red in team]
    return _emit(instance, groups=groups)


def big_input_schema(instance: Instance) -> MappingSchema:
    """Exactly one input above q/2: pair it with bins of the others, then cover the others."""
    _require_a2a(instance)
    q = instance.capacity
    bigs = [it for it in instance.inputs if 2 * it.size > q]
    if len(bigs) > 1:
        raise InfeasibleInstanceError(
            f"inputs {bigs[0].id!r} and {bigs[1].id!r} are both bigger than q/2: infeasible")
    if not bigs:
        raise WrongStrategyError("no input is bigger than q/2")
    big = bigs[0]
    w = big.size
    smalls = [it for it in instance.inputs if it is not big]
    if not smalls:
        return MappingSchema(())
    largest = max(it.size for it in smalls)
    if w + largest > q:
        raise InfeasibleInstanceError(f"input {big.id!r} cannot share a reducer with every other input")
    if 3 * w <= 2 * q and 3 * largest <= q:
        bins = _pack(smalls, q // 3)
        rest = [red for team in cover_capacity3(bins) for red in team]
    elif 4 * w <= 3 * q and 4 * largest <= q:
        bins = _pack(smalls, q // 4)
        rest = [red for team in pair_group_teams(bins, 2) for red in team]
    else:
        bins = _pack(smalls, q - w)
        rest = _pairs_of_bins(_pack(smalls, q // 2))
    groups = [((big.id,), b) for b in bins] + rest
    return _emit(instance, groups=groups)


def x2y_schema(instance: Instance, bin_size: int | None = None) -> MappingSchema:
    """Pack X into bins of w (largest X size) and Y into bins of q - w; one reducer per bin pair.

    With ``bin_size`` b (2b <= q, all sizes <= b) both lists use bins of b instead.
    """
    if instance.kind is not ProblemKind.X2Y:
        raise WrongStrategyError("x2y_schema needs an X2Y instance")
    if not instance.feasible:
        raise InfeasibleInstanceError("some x and y cannot share a reducer: infeasible")
    q = instance.capacity
    if not instance.inputs or not instance.y_inputs:
        return MappingSchema(())
    if bin_size is None:
        wx = max(it.size for it in instance.inputs)
        xcap, ycap = wx, q - wx
    else:
        if 2 * bin_size > q:
            raise DomainError(f"bin size {bin_size} exceeds q/2")
        xcap = ycap = bin_size
    xb = _pack(instance.inputs, xcap)
    yb = _pack(instance.y_inputs, ycap)
    sizes = instance.sizes()
    return MappingSchema.from_groups([a + b for a in xb for b in yb], sizes)


# ---------------------------------------------------------------- dispatch

def _largest_k(instance: Instance) -> int | None:
    q = instance.capacity
    wmax = max((it.size for it in instance.inputs), default=0)
    ks = [k for k in range(2, q + 1) if q % k == 0 and k * wmax <= q]
    return max(ks) if ks else None


def auto_select(instance: Instance) -> StrategyChoice:
    if instance.kind is ProblemKind.X2Y:
        if not instance.feasible:
            raise InfeasibleInstanceError("some x and y cannot share a reducer: infeasible")
        return StrategyChoice(Strategy.X2Y)
    if not instance.feasible:
        raise InfeasibleInstanceError("the two largest inputs exceed the capacity: infeasible")
    q, m = instance.capacity, instance.m
    if any(2 * it.size > q for it in instance.inputs):
        return StrategyChoice(Strategy.BIG_INPUT)
    w = instance.equal_size()
    if w:
        cap = q // w
        if is_prime(cap) and m == cap * cap:
            return StrategyChoice(Strategy.AU)
        if cap == 2:
            return StrategyChoice(Strategy.Q2)
        if cap == 3 and m >= 3:
            return StrategyChoice(Strategy.Q3)
        if cap >= 3:
            try:
                d = nearest_prime_decomposition(cap, m)
            except NoDecompositionError:
                d = None
            if d is not None and d.l > 0 and m == d.p ** 2 + d.l * (d.p + 1):
                return StrategyChoice(Strategy.ALG2, {"p": d.p, "l": d.l})
        if is_prime(cap):
            l = _exact_log(m, cap)
            if l is not None and l > 2:
                return StrategyChoice(Strategy.ALG3, {"l": l})
    k = _largest_k(instance)
    if k is not None and k >= 4:
        name = Strategy.ALG1A if k % 2 else Strategy.ALG1B
        return StrategyChoice(name, {"k": k})
    has_big = any(3 * it.size > q for it in instance.inputs)
    has_small = any(3 * it.size <= q for it in instance.inputs)
    if has_big and has_small:
        return StrategyChoice(Strategy.ALG4)
    return StrategyChoice(Strategy.BINPACK_PAIRS)


def _default_k(instance: Instance, odd: bool) -> int:
    q = instance.capacity
    wmax = max((it.size for it in instance.inputs), default=0)
    ks = [k for k in range(4, q + 1) if q % k == 0 and k % 2 == odd and k * wmax <= q]
    if not ks:
        raise WrongStrategyError("no admissible k divides q for these sizes")
    return max(ks)


def run(instance: Instance, choice: StrategyChoice) -> MappingSchema:
    """Execute a strategy on an instance."""
    name, params = Strategy(choice.name), choice.parameters
    if name is Strategy.X2Y:
        return x2y_schema(instance, params.get("bin_size"))
    _require_a2a(instance)
    if not instance.feasible:
        raise InfeasibleInstanceError("the two largest inputs exceed the capacity: infeasible")
    if name is Strategy.BINPACK_PAIRS:
        return binpack_pairs_schema(instance)
    if name is Strategy.ALG1A:
        return alg1a(instance, params.get("k") or _default_k(instance, odd=True))
    if name is Strategy.ALG1B:
        return alg1b(instance, params.get("k") or _default_k(instance, odd=False))
    if name is Strategy.ALG4:
        return alg4_hybrid(instance)
    if name is Strategy.BIG_INPUT:
        return big_input_schema(instance)
    w, cap = _equal_capacity(instance)
    tokens = _units(instance)
    if name is Strategy.ALG2:
        if "p" in params:
            d = PrimeDecomposition(params["p"], params["l"])
        elif params.get("l") is not None:
            d = PrimeDecomposition(cap - params["l"], params["l"])
        else:
            d = nearest_prime_decomposition(cap, instance.m)
        return alg2(instance, d)
    if name is Strategy.ALG3:
        l = params.get("l")
        if l is None:
            l = 1
            while cap ** l < instance.m:
                l += 1
        return alg3(cap, l, instance)
    if name is Strategy.AU:
        if not is_prime(cap) or instance.m != cap * cap:
            raise WrongStrategyError(f"AU needs a prime effective capacity and m = {cap}^2")
        return _emit(instance, teams=au_teams([tokens[cap * i:cap * i + cap] for i in range(cap)]))
    if name is Strategy.Q2:
        if len(tokens) < 2:
            return MappingSchema(())
        padded = tokens + [None] * (next_pow2(len(tokens)) - len(tokens))
        teams = [[r for r in team if None not in r] for team in q2_teams(padded)]
        return _emit(instance, teams=teams)
    if name is Strategy.Q3:
        if cap < 3:
            raise WrongStrategyError("Q3 needs room for three inputs per reducer")
        return _emit(instance, teams=odd_capacity_teams(tokens, 3))
    raise WrongStrategyError(f"unknown strategy {name}")


def solve(instance: Instance, choice: StrategyChoice | None = None) -> tuple[StrategyChoice, MappingSchema]:
    if choice is None:
        choice = auto_select(instance)
    return choice, run(instance, choice)
