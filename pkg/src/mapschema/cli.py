"""Command-line interface.

Exit codes:
    0   success (feasible schema / valid schema / oracle found a schema)
    1   I/O or parse error, or a schema naming unknown inputs
    2   infeasible instance (or oracle budget exhausted)
    3   schema fails validation
    64  usage error (bad flags, unknown or inapplicable strategy)
"""
from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from pathlib import Path

from . import approx, bounds
from .core import (InfeasibleInstanceError, InputItem, Instance, MalformedSchemaError,
                   MappingSchema, MappingSchemaError, ProblemKind, Reducer, cost_report,
                   validate)
from .oracle import PartitionInstance, brute_force_a2a, brute_force_x2y, partition_to_a2a, partition_to_x2y

EXIT_OK, EXIT_IO, EXIT_INFEASIBLE, EXIT_INVALID, EXIT_USAGE = 0, 1, 2, 3, 64

STRATEGIES = {
    "binpack": approx.Strategy.BINPACK_PAIRS,
    "alg1a": approx.Strategy.ALG1A,
    "alg1b": approx.Strategy.ALG1B,
    "alg2": approx.Strategy.ALG2,
    "alg3": approx.Strategy.ALG3,
    "alg4": approx.Strategy.ALG4,
    "big": approx.Strategy.BIG_INPUT,
    "au": approx.Strategy.AU,
    "q2": approx.Strategy.Q2,
    "q3": approx.Strategy.Q3,
    "x2y": approx.Strategy.X2Y,
}


class ParseError(Exception):
    pass


# ---------------------------------------------------------------- serialization

def _items_to_json(items) -> list[dict]:
    return [{"id": it.id, "size": it.size} for it in items]


def _items_from_json(raw, label: str) -> tuple[InputItem, ...]:
    if not isinstance(raw, list):
        raise ParseError(f"'{label}' must be a list")
    out = []
    for entry in raw:
        if not isinstance(entry, dict) or "id" not in entry or "size" not in entry:
            raise ParseError(f"each entry of '{label}' needs 'id' and 'size'")
        out.append(InputItem(str(entry["id"]), entry["size"]))
    return tuple(out)


def instance_to_json(instance: Instance) -> dict:
    doc = {"capacity": instance.capacity, "problem": instance.kind.value,
           "inputs": _items_to_json(instance.inputs)}
    if instance.kind is ProblemKind.X2Y:
        doc["y_inputs"] = _items_to_json(instance.y_inputs)
    if instance.metadata:
        doc["metadata"] = instance.metadata
    return doc


def instance_from_json(doc) -> Instance:
    if not isinstance(doc, dict):
        raise ParseError("instance file must hold a JSON object")
    try:
        kind = ProblemKind(doc.get("problem", "a2a"))
        inputs = _items_from_json(doc.get("inputs", []), "inputs")
        y_inputs = _items_from_json(doc.get("y_inputs", []), "y_inputs")
        if kind is ProblemKind.X2Y and "y_inputs" not in doc:
            raise ParseError("x2y instances need 'y_inputs'")
        return Instance(doc["capacity"], kind, inputs, y_inputs, metadata=doc.get("metadata", {}))
    except KeyError as exc:
        raise ParseError(f"missing field {exc.args[0]!r}") from None
    except ValueError as exc:
        raise ParseError(str(exc)) from None


def _ratio(r: Fraction | None):
    return None if r is None else str(r)


def schema_to_json(schema: MappingSchema, instance: Instance | None = None) -> dict:
    doc = {"reducers": [{"id": r.id, "inputs": list(r.inputs), "load": r.load}
                        for r in schema.reducers]}
    if schema.teams is not None:
        doc["teams"] = [list(t) for t in schema.teams]
    if instance is not None:
        rep = cost_report(schema, instance)
        doc["stats"] = {
            "communication_cost": rep.communication_cost,
            "reducer_count": rep.reducer_count,
            "replication": rep.replication,
            "lower_bound_cost": rep.lower_bound_cost,
            "lower_bound_reducers": rep.lower_bound_reducers,
            "cost_ratio": _ratio(rep.cost_ratio),
        }
    return doc


def schema_from_json(doc) -> MappingSchema:
    if not isinstance(doc, dict) or not isinstance(doc.get("reducers"), list):
        raise ParseError("schema file must hold an object with a 'reducers' list")
    try:
        reducers = tuple(Reducer(int(r["id"]), tuple(str(i) for i in r["inputs"]), int(r["load"]))
                         for r in doc["reducers"])
        teams = doc.get("teams")
        return MappingSchema(reducers, None if teams is None else tuple(tuple(t) for t in teams))
    except (KeyError, TypeError) as exc:
        raise ParseError(f"bad reducer entry: {exc}") from None


def _read_json(path: str):
    try:
        return json.loads(Path(path).read_text())
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc.strerror}") from None
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path} is not valid JSON: {exc}") from None


def _dump(doc) -> str:
    return json.dumps(doc, indent=2) + "\n"


def _write(doc, out: str | None) -> None:
    text = _dump(doc)
    if out is None or out == "-":
        sys.stdout.write(text)
    else:
        Path(out).write_text(text)


def load_instance(path: str) -> Instance:
    return instance_from_json(_read_json(path))


# ---------------------------------------------------------------- commands

def _summary(choice: approx.StrategyChoice, schema: MappingSchema, instance: Instance) -> str:
    rep = cost_report(schema, instance)
    ratio = "n/a" if rep.cost_ratio is None else f"{float(rep.cost_ratio):.4g}"
    params = "".join(f" {k}={v}" for k, v in sorted(choice.parameters.items()))
    return (f"strategy={choice.name.value}{params} reducers={rep.reducer_count} "
            f"cost={rep.communication_cost} lb_cost={rep.lower_bound_cost} "
            f"lb_reducers={rep.lower_bound_reducers} ratio={ratio}")


def cmd_solve(args) -> int:
    instance = load_instance(args.instance)
    if args.strategy == "auto":
        choice = None
    else:
        params = {k: v for k, v in (("k", args.k), ("l", args.l)) if v is not None}
        choice = approx.StrategyChoice(STRATEGIES[args.strategy], params)
    try:
        choice, schema = approx.solve(instance, choice)
    except InfeasibleInstanceError as exc:
        print(f"infeasible: {exc}", file=sys.stderr)
        return EXIT_INFEASIBLE
    except MappingSchemaError as exc:
        print(f"strategy not applicable: {exc}", file=sys.stderr)
        return EXIT_USAGE
    doc = schema_to_json(schema, instance)
    if args.out:
        _write(doc, args.out)
        print(_summary(choice, schema, instance))
    else:
        _write(doc, None)
        print(_summary(choice, schema, instance), file=sys.stderr)
    return EXIT_OK


def cmd_validate(args) -> int:
    instance = load_instance(args.instance)
    schema = schema_from_json(_read_json(args.schema))
    try:
        report = validate(schema, instance)
    except MalformedSchemaError as exc:
        print(f"malformed schema: {exc}", file=sys.stderr)
        return EXIT_IO
    if report.feasible:
        print(f"feasible: {schema.reducer_count} reducers, cost {schema.communication_cost}")
        return EXIT_OK
    for a, b in report.uncovered_pairs:
        print(f"uncovered pair: {a} {b}")
    for rid, load in report.capacity_violations:
        print(f"capacity violation: reducer {rid} load {load} > {instance.capacity}")
    return EXIT_INVALID


def bounds_table(instance: Instance) -> list[tuple[str, object, object]]:
    q = instance.capacity
    rows: list[tuple[str, object, object]] = []
    if instance.kind is ProblemKind.X2Y:
        bp = bounds.lb_x2y(instance.sum_x, instance.sum_y, q)
        rows.append(("x2y", bp.cost_bound, bp.reducer_bound))
        return rows
    s, m = instance.total_size, instance.m
    bp = bounds.lb_a2a(s, q)
    rows.append(("a2a", bp.cost_bound, bp.reducer_bound))
    wmax = max((it.size for it in instance.inputs), default=0)
    for k in range(2, q + 1):
        if q % k == 0 and k * wmax <= q:
            rows.append((f"binned k={k}", bounds.lb_a2a_binned(s, q, k), "-"))
    w = instance.equal_size()
    if w and q // w >= 2:
        unit = bounds.lb_a2a_unit(m, q // w)
        rows.append((f"equal-size (capacity {q // w})", unit.cost_bound * w, unit.reducer_bound))
    if m and 2 * wmax <= q:
        red, cost = bounds.ub_binpack_pairs(s, q)
        rows.append(("upper: bin pairs", f"<= {float(cost):.6g}", f"<= {float(red):.6g}"))
    return rows


def cmd_bounds(args) -> int:
    instance = load_instance(args.instance)
    rows = bounds_table(instance)
    print(f"{'bound':<28} {'cost':>14} {'reducers':>12}")
    for name, cost, red in rows:
        print(f"{name:<28} {cost!s:>14} {red!s:>12}")
    return EXIT_OK


def cmd_oracle(args) -> int:
    instance = load_instance(args.instance)
    search = brute_force_a2a if instance.kind is ProblemKind.A2A else brute_force_x2y
    result = search(instance, args.max_reducers)
    if result.exhausted:
        print(f"exhausted: no feasible schema with at most {args.max_reducers} reducers")
        return EXIT_INFEASIBLE
    print(f"optimal_reducers={result.optimal_reducers} optimal_cost={result.optimal_cost}")
    for r in result.witness.reducers:
        print(f"  reducer {r.id}: {' '.join(r.inputs)} (load {r.load})")
    if args.out:
        _write(schema_to_json(result.witness, instance), args.out)
    return EXIT_OK


def cmd_gen(args) -> int:
    p = PartitionInstance(tuple(args.numbers))
    make = partition_to_a2a if args.reduction == "a2a" else partition_to_x2y
    instance = make(p, args.z)
    _write(instance_to_json(instance), args.out)
    return EXIT_OK


# ---------------------------------------------------------------- entry point

class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="mapschema", description="Plan and check mapping schemas for reducers.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("solve", help="build a schema for an instance")
    p.add_argument("instance")
    p.add_argument("--strategy", default="auto", choices=["auto", *STRATEGIES])
    p.add_argument("--k", type=int)
    p.add_argument("--l", type=int)
    p.add_argument("--out")
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("validate", help="check a schema against an instance")
    p.add_argument("instance")
    p.add_argument("schema")
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("bounds", help="print the lower bounds of an instance")
    p.add_argument("instance")
    p.set_defaults(func=cmd_bounds)

    p = sub.add_parser("oracle", help="exhaustive optimum for a tiny instance")
    p.add_argument("instance")
    p.add_argument("--max-reducers", type=int, default=8)
    p.add_argument("--out")
    p.set_defaults(func=cmd_oracle)

    p = sub.add_parser("gen", help="write a partition-reduction instance")
    p.add_argument("--reduction", choices=["a2a", "x2y"], required=True)
    p.add_argument("--numbers", type=int, nargs="+", required=True)
    p.add_argument("--z", type=int, required=True)
    p.add_argument("--out")
    p.set_defaults(func=cmd_gen)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ParseError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
    except MalformedSchemaError as exc:
        print(f"malformed schema: {exc}", file=sys.stderr)
        return EXIT_IO
    except MappingSchemaError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    raise SystemExit(main())
