"""Schemas for equal-size (unit) inputs built from teams of reducers.

The combinatorial helpers here work on arbitrary hashable tokens so the
approximation algorithms can reuse them on bins and groups of bins.
A token of ``None`` (or an empty group) marks a dummy slot.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Hashable, Sequence

from .core import DomainError, InputItem, Instance, MappingSchema, unit_instance


@dataclass(frozen=True)
class TeamedSchema:
    schema: MappingSchema
    unit_capacity: int
    instance: Instance


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    f = 2
    while f * f <= n:
        if n % f == 0:
            return False
        f += 1
    return True


def next_pow2(n: int) -> int:
    p = 1
    while p < n:
        p *= 2
    return p


def is_pow2(n: int) -> bool:
    return n >= 1 and n & (n - 1) == 0


def q2_teams(items: Sequence[Hashable]) -> list[list[tuple]]:
    """Round-robin teams for a power-of-two number of items.

    The items are split into halves g and h. The first len/2 teams pair g[i]
    with h[(i + t) % half]; the rest merge the j-th recursive team of each half.
    Every pair of items lands in exactly one reducer and each team holds every
    item once.
    """
    n = len(items)
    if n < 2 or not is_pow2(n):
        raise DomainError(f"team construction needs a power of two >= 2 items, got {n}")
    if n == 2:
        return [[(items[0], items[1])]]
    half = n // 2
    g, h = items[:half], items[half:]
    cross = [[(g[i], h[(i + t) % half]) for i in range(half)] for t in range(half)]
    merged = [a + b for a, b in zip(q2_teams(g), q2_teams(h))]
    return cross + merged


def au_teams(grid: Sequence[Sequence[Hashable]]) -> list[list[tuple]]:
    """Teams of the prime-square rule: team t < q sends cell (i, j) to reducer (i + t*j) % q,
    team q holds the columns. Any two cells share exactly one reducer."""
    q = len(grid)
    teams = []
    for t in range(q):
        slots: list[list] = [[] for _ in range(q)]
        for j in range(q):
            for i in range(q):
                slots[(i + t * j) % q].append(grid[i][j])
        teams.append([tuple(s) for s in slots])
    teams.append([tuple(grid[i][j] for i in range(q)) for j in range(q)])
    return teams


def odd_capacity_teams(units: Sequence[Hashable], k: int, spill: bool = False,
                       top: bool = True) -> list[list[tuple]]:
    """Two-step construction for capacity k (odd, >= 3) over unit tokens.

    The first y units (set A) are grouped into derived inputs of (k-1)/2 units
    and paired with round-robin teams; the i-th leftover unit (set B) rides
    along in every reducer of team i; B is then handled recursively.  With
    ``spill`` set, B is folded into dummy group slots when it fits.
    """
    m = len(units)
    if m == 0:
        return []
    if m == 1:
        return [[tuple(units)]] if top else []
    if m <= k:
        return [[tuple(units)]]
    half = (k - 1) // 2
    y = min(m, half * (2 * m // (k + 1) + 1))
    a, b = list(units[:y]), list(units[y:])
    groups = [tuple(a[i:i + half]) for i in range(0, y, half)]
    size = next_pow2(len(groups))
    if spill and b:
        b_groups = [tuple(b[i:i + half]) for i in range(0, len(b), half)]
        if len(b_groups) <= size - len(groups):
            groups += b_groups
            b = []
    groups += [()] * (size - len(groups))
    if len(b) > size - 1:
        raise AssertionError("leftover set larger than the team count")
    teams = []
    for t, team in enumerate(q2_teams(groups)):
        extra = (b[t],) if t < len(b) else ()
        reducers = []
        for g1, g2 in team:
            if not g1 and not g2:
                continue
            if not (g1 and g2) and not extra:
                # a lone real group meets the other groups elsewhere in this team
                continue
            reducers.append(g1 + g2 + extra)
        if reducers:
            teams.append(reducers)
    return teams + odd_capacity_teams(b, k, spill, top=False)


def pair_group_teams(units: Sequence[Hashable], per_group: int) -> list[list[tuple]]:
    """Group units into derived inputs of ``per_group`` and pair the derived inputs
    with round-robin teams (padding to a power of two). Reducers hold 2*per_group units."""
    m = len(units)
    if m == 0:
        return []
    if m <= 2 * per_group:
        return [[tuple(units)]]
    groups = [tuple(units[i:i + per_group]) for i in range(0, m, per_group)]
    groups += [()] * (next_pow2(len(groups)) - len(groups))
    teams = []
    for team in q2_teams(groups):
        reducers = [g1 + g2 for g1, g2 in team if g1 and g2]
        if reducers:
            teams.append(reducers)
    return teams


def strip_dummies(teams: list[list[tuple]]) -> list[list[tuple]]:
    """Remove dummy tokens; drop reducers with fewer than two real tokens and empty teams."""
    out = []
    for team in teams:
        kept = []
        for red in team:
            real = tuple(t for t in red if t is not None)
            if len(real) >= 2:
                kept.append(real)
        if kept:
            out.append(kept)
    return out


def _ids(m: int) -> list[str]:
    return [str(i) for i in range(1, m + 1)]


def _teamed(teams, m: int, cap: int) -> TeamedSchema:
    inst = unit_instance(m, cap)
    return TeamedSchema(MappingSchema.from_teams(teams, inst.sizes()), cap, inst)


def schema_q2(m: int) -> TeamedSchema:
    """Capacity-2 schema: every pair in its own reducer, organised in m-1 teams when m is a power of two.

    Other m are padded with dummies and every reducer touching a dummy is deleted.
    """
    if m < 2:
        raise DomainError(f"schema_q2 needs m >= 2, got {m}")
    tokens: list = _ids(m) + [None] * (next_pow2(m) - m)
    teams = [[r for r in team if None not in r] for team in q2_teams(tokens)]
    return _teamed([t for t in teams if t], m, 2)


def schema_q3(m: int) -> TeamedSchema:
    """Capacity-3 schema via the A/B recursion; optimal when m + 1 is a power of two."""
    if m < 3:
        raise DomainError(f"schema_q3 needs m >= 3, got {m}")
    return _teamed(odd_capacity_teams(_ids(m), 3), m, 3)


def au_schema(q: int, m: int) -> TeamedSchema:
    """Prime q, m = q^2 unit inputs laid out row-major: cell (i, j) is input q*i + j + 1."""
    if not is_prime(q):
        raise DomainError(f"au_schema needs a prime capacity, got {q}")
    if m != q * q:
        raise DomainError(f"au_schema needs m = q^2 = {q * q}, got {m}")
    ids = _ids(m)
    grid = [[ids[q * i + j] for j in range(q)] for i in range(q)]
    return _teamed(au_teams(grid), m, q)


def au_plus_one_schema(p: int) -> TeamedSchema:
    """m = p^2 + p + 1 inputs, capacity p + 1: the prime square plus one extra input per team."""
    if not is_prime(p):
        raise DomainError(f"au_plus_one_schema needs a prime, got {p}")
    m = p * p + p + 1
    ids = _ids(m)
    grid = [[ids[p * i + j] for j in range(p)] for i in range(p)]
    extra = ids[p * p:]
    teams = [[red + (extra[t],) for red in team] for t, team in enumerate(au_teams(grid))]
    teams.append([tuple(extra)])
    return _teamed(teams, m, p + 1)


def teams_pow2(u: int, group_size: int = 1) -> TeamedSchema:
    """u = 2^i derived inputs of size group_size in 2^i - 1 teams of 2^(i-1) reducers.

    Built by splitting into halves, recursing, merging the j-th teams of both
    halves and adding the 2^(i-1) rotating cross teams; the cross teams are
    listed first so the table lines up with schema_q2.
    """
    if not is_pow2(u) or u < 2:
        raise DomainError(f"teams_pow2 needs a power of two >= 2, got {u}")
    if group_size < 1:
        raise DomainError("group_size must be positive")
    ids = _ids(u)
    inst = Instance(2 * group_size, "a2a", tuple(InputItem(i, group_size) for i in ids))
    schema = MappingSchema.from_teams(q2_teams(ids), inst.sizes())
    return TeamedSchema(schema, 2, inst)

