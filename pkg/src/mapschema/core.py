"""Domain types, schema validation and cost accounting."""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from itertools import combinations
from typing import Iterable, Mapping, Sequence


class MappingSchemaError(Exception):
    """Base class for every error raised by this package."""


class DomainError(MappingSchemaError, ValueError):
    """An argument lies outside the domain of an operation."""


class MalformedSchemaError(MappingSchemaError, ValueError):
    """A schema references unknown inputs or carries inconsistent loads."""


class InfeasibleInstanceError(MappingSchemaError):
    """No mapping schema exists: some required pair cannot share a reducer."""


class WrongStrategyError(MappingSchemaError, ValueError):
    """The instance violates the preconditions of the requested strategy."""


class InfeasibleStrategyError(WrongStrategyError):
    """The strategy's layout cannot hold the instance (e.g. too many leftover inputs)."""


class NoDecompositionError(MappingSchemaError):
    """No prime decomposition of the capacity fits the instance."""


class ProblemKind(str, Enum):
    A2A = "a2a"
    X2Y = "x2y"


_DIGITS = re.compile(r"(\d+)")


def id_key(item_id: str):
    """Natural sort key so that 'i2' sorts before 'i10'."""
    return tuple(int(p) if p.isdigit() else p for p in _DIGITS.split(item_id))


@dataclass(frozen=True)
class InputItem:
    id: str
    size: int

    def __post_init__(self):
        if not isinstance(self.id, str) or not self.id:
            raise DomainError(f"input id must be a non-empty string, got {self.id!r}")
        if isinstance(self.size, bool) or not isinstance(self.size, int):
            raise DomainError(f"size of {self.id!r} must be an integer")
        if self.size < 0:
            raise DomainError(f"size of {self.id!r} is negative: {self.size}")


@dataclass(frozen=True)
class Instance:
    capacity: int
    kind: ProblemKind
    inputs: tuple[InputItem, ...]
    y_inputs: tuple[InputItem, ...] = ()
    metadata: dict = field(default_factory=dict, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "kind", ProblemKind(self.kind))
        object.__setattr__(self, "inputs", tuple(self.inputs))
        object.__setattr__(self, "y_inputs", tuple(self.y_inputs))
        if isinstance(self.capacity, bool) or not isinstance(self.capacity, int) or self.capacity < 1:
            raise DomainError(f"capacity must be a positive integer, got {self.capacity!r}")
        if self.kind is ProblemKind.A2A and self.y_inputs:
            raise DomainError("y_inputs are only allowed for X2Y instances")
        seen = set()
        for item in self.all_items():
            if item.id in seen:
                raise DomainError(f"duplicate input id {item.id!r}")
            seen.add(item.id)
            if item.size > self.capacity:
                raise DomainError(
                    f"input {item.id!r} of size {item.size} exceeds capacity {self.capacity}")

    def all_items(self) -> tuple[InputItem, ...]:
        return self.inputs + self.y_inputs

    def sizes(self) -> dict[str, int]:
        return {it.id: it.size for it in self.all_items()}

    @property
    def m(self) -> int:
        return len(self.inputs)

    @property
    def total_size(self) -> int:
        return sum(it.size for it in self.inputs)

    @property
    def sum_x(self) -> int:
        return self.total_size

    @property
    def sum_y(self) -> int:
        return sum(it.size for it in self.y_inputs)

    @property
    def feasible(self) -> bool:
        """False when some required pair cannot fit in a single reducer."""
        q = self.capacity
        if self.kind is ProblemKind.A2A:
            if len(self.inputs) < 2:
                return True
            a, b = sorted((it.size for it in self.inputs), reverse=True)[:2]
            return a + b <= q
        if not self.inputs or not self.y_inputs:
            return True
        return max(it.size for it in self.inputs) + max(it.size for it in self.y_inputs) <= q

    def equal_size(self) -> int | None:
        """The common size when every input has the same size, else None."""
        sizes = {it.size for it in self.all_items()}
        return sizes.pop() if len(sizes) == 1 else None


def a2a_instance(sizes: Mapping[str, int] | Sequence[int], capacity: int, **metadata) -> Instance:
    """Build an A2A instance from a size list (ids '1'..'m') or an id->size map."""
    return Instance(capacity, ProblemKind.A2A, _items(sizes), metadata=dict(metadata))


def x2y_instance(x_sizes, y_sizes, capacity: int, **metadata) -> Instance:
    """X ids default to 'x1'.., Y ids to 'y1'.. when plain size lists are given."""
    return Instance(capacity, ProblemKind.X2Y, _items(x_sizes, "x"), _items(y_sizes, "y"),
                    metadata=dict(metadata))


def unit_instance(m: int, capacity: int) -> Instance:
    return a2a_instance([1] * m, capacity)


def _items(sizes, prefix: str = "") -> tuple[InputItem, ...]:
    if isinstance(sizes, Mapping):
        return tuple(InputItem(str(k), v) for k, v in sizes.items())
    return tuple(InputItem(f"{prefix}{i}", w) for i, w in enumerate(sizes, start=1))


@dataclass(frozen=True)
class Reducer:
    id: int
    inputs: tuple[str, ...]
    load: int

    def __post_init__(self):
        object.__setattr__(self, "inputs", tuple(self.inputs))
        if len(set(self.inputs)) != len(self.inputs):
            raise MalformedSchemaError(f"reducer {self.id} holds a duplicate input: {self.inputs}")

    @property
    def assigned(self) -> frozenset[str]:
        return frozenset(self.inputs)


@dataclass(frozen=True)
class MappingSchema:
    reducers: tuple[Reducer, ...]
    teams: tuple[tuple[int, ...], ...] | None = None

    def __post_init__(self):
        object.__setattr__(self, "reducers", tuple(self.reducers))
        ids = [r.id for r in self.reducers]
        if len(set(ids)) != len(ids):
            raise MalformedSchemaError("reducer ids are not unique")
        if self.teams is not None:
            teams = tuple(tuple(t) for t in self.teams)
            object.__setattr__(self, "teams", teams)
            flat = [r for t in teams for r in t]
            if len(flat) != len(set(flat)) or set(flat) != set(ids):
                raise MalformedSchemaError("teams do not partition the reducer ids")

    @property
    def reducer_count(self) -> int:
        return len(self.reducers)

    @property
    def communication_cost(self) -> int:
        return sum(r.load for r in self.reducers)

    def groups(self) -> list[tuple[str, ...]]:
        return [r.inputs for r in self.reducers]

    def team_groups(self) -> list[list[tuple[str, ...]]]:
        if self.teams is None:
            return []
        by_id = {r.id: r.inputs for r in self.reducers}
        return [[by_id[rid] for rid in team] for team in self.teams]

    @classmethod
    def from_groups(cls, groups: Iterable[Sequence[str]], sizes: Mapping[str, int]) -> "MappingSchema":
        reducers = []
        for rid, g in enumerate(groups):
            reducers.append(Reducer(rid, tuple(g), _load(g, sizes)))
        return cls(tuple(reducers))

    @classmethod
    def from_teams(cls, teams: Iterable[Iterable[Sequence[str]]],
                   sizes: Mapping[str, int]) -> "MappingSchema":
        reducers, team_ids = [], []
        for team in teams:
            ids = []
            for g in team:
                rid = len(reducers)
                reducers.append(Reducer(rid, tuple(g), _load(g, sizes)))
                ids.append(rid)
            if ids:
                team_ids.append(tuple(ids))
        return cls(tuple(reducers), tuple(team_ids))


def _load(group, sizes) -> int:
    try:
        return sum(sizes[i] for i in group)
    except KeyError as exc:
        raise MalformedSchemaError(f"unknown input id {exc.args[0]!r}") from None


@dataclass(frozen=True)
class ValidationReport:
    uncovered_pairs: tuple[tuple[str, str], ...]
    capacity_violations: tuple[tuple[int, int], ...]

    @property
    def feasible(self) -> bool:
        return not self.uncovered_pairs and not self.capacity_violations


@dataclass(frozen=True)
class CostReport:
    communication_cost: int
    reducer_count: int
    replication: dict
    lower_bound_cost: int
    lower_bound_reducers: int
    cost_ratio: Fraction | None


def _membership(schema: MappingSchema, instance: Instance) -> tuple[dict[str, int], list[tuple[int, int]]]:
    """Bitmask of reducer positions per input id, plus capacity violations.

    Loads are recomputed from the instance; a stored load that disagrees is a malformed schema.
    """
    sizes = instance.sizes()
    masks = dict.fromkeys(sizes, 0)
    violations = []
    for pos, red in enumerate(schema.reducers):
        load = _load(red.inputs, sizes)
        if load != red.load:
            raise MalformedSchemaError(
                f"reducer {red.id} records load {red.load} but its inputs sum to {load}")
        bit = 1 << pos
        for i in red.inputs:
            masks[i] |= bit
        if load > instance.capacity:
            violations.append((red.id, load))
    return masks, violations


def validate_a2a(schema: MappingSchema, instance: Instance) -> ValidationReport:
    """Check that every unordered pair of inputs shares a reducer and no reducer is overloaded.

    Each input gets a bitmask of the reducers holding it, so a pair is covered
    iff the AND of its two masks is non-zero: O(m^2) big-int operations.
    """
    if instance.kind is not ProblemKind.A2A:
        raise DomainError("validate_a2a needs an A2A instance")
    masks, violations = _membership(schema, instance)
    ids = [it.id for it in instance.inputs]
    uncovered = tuple((a, b) for a, b in combinations(ids, 2) if not masks[a] & masks[b])
    return ValidationReport(uncovered, tuple(violations))


def validate_x2y(schema: MappingSchema, instance: Instance) -> ValidationReport:
    if instance.kind is not ProblemKind.X2Y:
        raise DomainError("validate_x2y needs an X2Y instance")
    masks, violations = _membership(schema, instance)
    uncovered = tuple((x.id, y.id) for x in instance.inputs for y in instance.y_inputs
                      if not masks[x.id] & masks[y.id])
    return ValidationReport(uncovered, tuple(violations))


def validate(schema: MappingSchema, instance: Instance) -> ValidationReport:
    if instance.kind is ProblemKind.A2A:
        return validate_a2a(schema, instance)
    return validate_x2y(schema, instance)


def pair_multiplicity(schema: MappingSchema) -> dict[frozenset, int]:
    """How many reducers hold each unordered pair of ids."""
    counts: dict[frozenset, int] = {}
    for red in schema.reducers:
        for a, b in combinations(red.inputs, 2):
            key = frozenset((a, b))
            counts[key] = counts.get(key, 0) + 1
    return counts


def instance_lower_bounds(instance: Instance) -> tuple[int, int]:
    """(cost, reducers) lower bounds applicable to any feasible schema for the instance."""
    from . import bounds

    q = instance.capacity
    if instance.kind is ProblemKind.X2Y:
        if not instance.inputs or not instance.y_inputs:
            return 0, 0
        bp = bounds.lb_x2y(instance.sum_x, instance.sum_y, q)
        return bp.cost_bound, bp.reducer_bound
    if instance.m < 2:
        # no pair to cover, so the empty schema is feasible
        return 0, 0
    bp = bounds.lb_a2a(instance.total_size, q)
    cost, reducers = bp.cost_bound, bp.reducer_bound
    w = instance.equal_size()
    if w:
        # equal sizes w behave like unit inputs under capacity q // w
        eff = q // w
        if eff >= 2:
            unit = bounds.lb_a2a_unit(instance.m, eff)
            cost = max(cost, unit.cost_bound * w)
            reducers = max(reducers, unit.reducer_bound)
    return cost, reducers


def cost_report(schema: MappingSchema, instance: Instance) -> CostReport:
    sizes = instance.sizes()
    replication = dict.fromkeys(sizes, 0)
    cost = 0
    for red in schema.reducers:
        cost += _load(red.inputs, sizes)
        for i in red.inputs:
            replication[i] += 1
    lb_cost, lb_red = instance_lower_bounds(instance)
    ratio = Fraction(cost, lb_cost) if lb_cost > 0 else None
    return CostReport(cost, schema.reducer_count, replication, lb_cost, lb_red, ratio)
