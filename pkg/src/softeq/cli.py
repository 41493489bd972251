"""Command-line front end.

Every subcommand works on the line-oriented file formats, prints integers
only, and is byte-deterministic for a fixed configuration and seed (bench
timing columns are opt-in via ``--timing`` for exactly that reason).

Exit codes: 0 success, 1 infeasible or propagation failure, 2 usage or
parse error, 3 method precondition violation (wrong instance class, budget
or cap exceeded).

Environment overrides (flags win): ``SOFTEQ_BRUTE_CAP`` for the exhaustive
search cap, ``SOFTEQ_PERM_BUDGET`` for the value-order budget,
``SOFTEQ_DP_MAX_CELLS`` for the DP table cap.
"""

from __future__ import annotations

import argparse
import os
import sys
import time
from pathlib import Path

from . import generate as gen
from .diversity import parse_multi_instance, propagate_cn_sim
from .greedy import TieBreak, greedy_max_equalities
from .intervaldp import max_equalities_dp, rc_filter_graph_min
from .model import (
    Assignment,
    BudgetError,
    ContiguityError,
    CostBounds,
    Instance,
    ParseError,
    PreconditionError,
    SofteqError,
    evaluate,
    pair_count,
    parse_instance,
)
from .occurrence import crest_partition, inverse_occurrence
from .oracle import brute_force_optimum, parse_3dm, reduce_3dm
from .solvers import (
    classify_values,
    solve_fpt_conflicting,
    solve_fpt_values,
    solve_heavy_class,
    solve_matching_class,
)
from .varmin import Mode, propagate_var_min

EXIT_OK = 0
EXIT_INFEASIBLE = 1
EXIT_USAGE = 2
EXIT_PRECONDITION = 3


def _env_int(name: str, fallback: int) -> int:
    raw = os.environ.get(name)
    if raw is None:
        return fallback
    try:
        return int(raw)
    except ValueError:
        raise ParseError(f"environment variable {name} must be an integer") from None


def _read(path: str) -> str:
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc.strerror}") from None


def _load_instance(path: str) -> Instance:
    return parse_instance(_read(path))


def _load_assignment(instance: Instance, path: str) -> Assignment:
    """Assignment file: one ``<name> <original-value>`` per line.

    Values outside the instance's universe are mapped to fresh ids above
    lam so relaxed assignments still evaluate correctly.
    """
    back = {}
    if instance.value_names:
        back = {orig: v + 1 for v, orig in enumerate(instance.value_names)}
    values: dict[str, int] = {}
    fresh: dict[int, int] = {}
    for lineno, line in enumerate(_read(path).splitlines(), start=1):
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        parts = stripped.split()
        if len(parts) != 2:
            raise ParseError("expected '<name> <value>'", lineno)
        name, raw = parts
        if name not in instance.variables:
            raise ParseError(f"unknown variable {name!r}", lineno)
        if name in values:
            raise ParseError(f"duplicate assignment for {name!r}", lineno)
        try:
            original = int(raw)
        except ValueError:
            raise ParseError(f"non-integer value {raw!r}", lineno) from None
        if back:
            v = back.get(original)
        else:
            v = original if 1 <= original <= instance.lam else None
        if v is None:
            if original not in fresh:
                fresh[original] = instance.lam + 1 + len(fresh)
            v = fresh[original]
        values[name] = v
    missing = set(instance.variables) - set(values)
    if missing:
        raise ParseError(f"assignment missing variables: {sorted(missing)}")
    relaxed = any(values[name] not in instance.domain(name) for name in values)
    return Assignment(values, relaxed=relaxed)


def _domain_labels(instance: Instance, domain) -> str:
    return " ".join(str(v) for v in instance.original_values(domain))


def _print_assignment(instance: Instance, s: Assignment) -> None:
    for name in instance.variables:
        print(f"assign {name} {instance.original_value(s[name])}")


def _tie_break_from_flag(instance: Instance, flag: str) -> TieBreak:
    if flag == "smallest":
        return TieBreak.smallest()
    if flag.startswith("list:"):
        back = {}
        if instance.value_names:
            back = {orig: v + 1 for v, orig in enumerate(instance.value_names)}
        preferred = []
        for chunk in flag[5:].split(","):
            original = int(chunk)
            preferred.append(back.get(original, original))
        return TieBreak(preferred)
    raise ParseError(f"unknown tie-break policy {flag!r}")


def cmd_eval(args) -> int:
    instance = _load_instance(args.instance)
    s = _load_assignment(instance, args.assignment)
    for line in evaluate(instance, s).lines():
        print(line)
    return EXIT_OK


def cmd_occ(args) -> int:
    instance = _load_instance(args.instance)
    inv = inverse_occurrence(instance)
    for count in sorted(inv.buckets):
        for lo, hi in inv.bucket(count):
            print(f"occ {count} {instance.original_value(lo)} {instance.original_value(hi)}")
    return EXIT_OK


def cmd_crests(args) -> int:
    instance = _load_instance(args.instance)
    part = crest_partition(instance)
    for lo, hi in part.crests:
        print(f"crest {instance.original_value(lo)} {instance.original_value(hi)}")
    return EXIT_OK


def cmd_propagate_var_min(args) -> int:
    instance = _load_instance(args.instance)
    hi = args.hi if args.hi is not None else instance.n
    outcome = propagate_var_min(instance, CostBounds(args.lo, hi), Mode(args.mode))
    if outcome.failed:
        print("FAIL")
        return EXIT_INFEASIBLE
    for name in instance.variables:
        if name in outcome.pruned:
            print(f"prune {name} {_domain_labels(instance, outcome.pruned[name])}")
    print(f"nprime.hi={outcome.cost.hi}")
    return EXIT_OK


def cmd_filter_graph_min(args) -> int:
    instance = _load_instance(args.instance)
    bounds = CostBounds(args.min_diseq, args.max_diseq)
    outcome = rc_filter_graph_min(
        instance, bounds, use_crest_reduction=not args.no_crest_reduction
    )
    if outcome.failed:
        print("FAIL")
        return EXIT_INFEASIBLE
    for name in instance.variables:
        if name in outcome.pruned:
            print(f"prune {name} {_domain_labels(instance, outcome.pruned[name])}")
    print(f"n.lo={outcome.cost.lo}")
    return EXIT_OK


def cmd_greedy(args) -> int:
    instance = _load_instance(args.instance)
    result = greedy_max_equalities(instance, _tie_break_from_flag(instance, args.tie_break))
    print(f"lower_bound={result.lower_bound}")
    print(f"objective={result.objective}")
    _print_assignment(instance, result.assignment)
    return EXIT_OK


def cmd_solve(args) -> int:
    instance = _load_instance(args.instance)
    budget = args.budget if args.budget is not None else _env_int("SOFTEQ_PERM_BUDGET", 3_628_800)
    cap = args.cap if args.cap is not None else _env_int("SOFTEQ_BRUTE_CAP", 10_000_000)
    if args.method == "dp":
        best, witness = max_equalities_dp(
            instance, use_crest_reduction=not args.no_crest_reduction
        )
    elif args.method == "matching":
        best, witness = solve_matching_class(instance)
    elif args.method == "heavy":
        best, witness = solve_heavy_class(instance)
    elif args.method == "fpt":
        best, witness = solve_fpt_values(instance, budget)
    elif args.method == "fpt-conflict":
        best, witness = solve_fpt_conflicting(instance, budget)
    else:
        best, witness = (lambda r: (r.best, r.witness))(
            brute_force_optimum(instance, cap, collect_optima=False)
        )
    print(f"optimum={best}")
    _print_assignment(instance, witness)
    return EXIT_OK


def cmd_classify(args) -> int:
    instance = _load_instance(args.instance)
    cls = classify_values(instance)
    heavy = sorted(instance.original_value(v) for v in cls.heavy)
    conflicting = sorted(instance.original_value(v) for v in cls.conflicting)
    print("heavy: " + " ".join(map(str, heavy)))
    print("conflicting: " + " ".join(map(str, conflicting)))
    return EXIT_OK


def cmd_reduce_3dm(args) -> int:
    tdm = parse_3dm(_read(args.instance))
    instance = reduce_3dm(tdm)
    for name, dom in instance.items():
        print(f"var {name} set " + _domain_labels(instance, dom))
    return EXIT_OK


def cmd_similar(args) -> int:
    multi = parse_multi_instance(_read(args.instance))
    outcome = propagate_cn_sim(multi)
    if outcome.failed:
        print("FAIL")
        return EXIT_INFEASIBLE
    for name in multi.columns:
        for j in range(1, multi.copies + 1):
            if (j, name) in outcome.pruned:
                dom = outcome.pruned[(j, name)]
                labels = " ".join(str(multi.original_value(v)) for v in dom.values())
                print(f"prune {j}.{name} {labels}")
    for i, name in enumerate(multi.columns, start=1):
        print(f"N{i}.lo={outcome.columns[name].lo}")
    print(f"N.lo={outcome.total.lo}")
    return EXIT_OK


def cmd_generate(args) -> int:
    kind = args.kind
    seed = args.seed
    if kind == "set":
        text = gen.gen_set_instance(args.n, args.lam, args.dmax, seed)
    elif kind == "interval":
        text = gen.gen_interval_instance(args.n, args.lam, seed)
    elif kind == "two-occ":
        text = gen.gen_two_occ_instance(args.n, args.lam, seed)
    elif kind == "one-heavy":
        text = gen.gen_one_heavy_instance(args.n, args.lam, args.heavy, seed)
    elif kind == "3dm":
        text = gen.gen_3dm_instance(args.qx, args.qy, args.qz, args.triples, seed)
    else:
        text = gen.gen_multi_instance(args.copies, args.n, args.lam, args.cost_max, seed)
    if args.out:
        Path(args.out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)
    return EXIT_OK


_BENCH_SOLVERS = {
    "dp": lambda inst, budget, cap: max_equalities_dp(inst)[0],
    "matching": lambda inst, budget, cap: solve_matching_class(inst)[0],
    "heavy": lambda inst, budget, cap: solve_heavy_class(inst)[0],
    "fpt": lambda inst, budget, cap: solve_fpt_values(inst, budget)[0],
    "fpt-conflict": lambda inst, budget, cap: solve_fpt_conflicting(inst, budget)[0],
    "brute": lambda inst, budget, cap: brute_force_optimum(inst, cap, collect_optima=False).best,
    "greedy": lambda inst, budget, cap: greedy_max_equalities(inst).lower_bound,
}


def cmd_bench(args) -> int:
    methods = [m for m in args.methods.split(",") if m]
    for m in methods:
        if m not in _BENCH_SOLVERS:
            raise ParseError(f"unknown method {m!r}")
    budget = _env_int("SOFTEQ_PERM_BUDGET", 3_628_800)
    cap = _env_int("SOFTEQ_BRUTE_CAP", 10_000_000)
    rows = []
    values: dict[tuple[str, str], int] = {}
    for path in args.instances:
        for method in methods:
            cell_value = "ERROR"
            note = ""
            nanos = "-"
            try:
                instance = _load_instance(path)
                started = time.perf_counter_ns()
                result = None
                for _ in range(args.reps):
                    result = _BENCH_SOLVERS[method](instance, budget, cap)
                if args.timing:
                    nanos = str((time.perf_counter_ns() - started) // args.reps)
                cell_value = str(result)
                values[(method, path)] = result
            except SofteqError as exc:
                note = str(exc).splitlines()[0]
            rows.append((method, path, cell_value, nanos, note))
    rows.sort(key=lambda r: (r[0], r[1]))
    if rows:
        width_m = max(len(r[0]) for r in rows)
        width_p = max(len(r[1]) for r in rows)
        for method, path, value, nanos, note in rows:
            line = f"{method:<{width_m}}  {path:<{width_p}}  {value:>8}  {nanos:>12}"
            if note:
                line += f"  {note}"
            print(line)
    exact_methods = [m for m in methods if m != "greedy"]
    if "greedy" in methods and exact_methods:
        for path in args.instances:
            exact = next(
                (values[(m, path)] for m in exact_methods if (m, path) in values), None
            )
            if exact is not None and ("greedy", path) in values:
                print(f"ratio {path} {values[('greedy', path)]}/{exact}")
    for method, path, value, nanos, note in rows:
        print(f"bench {method} {path} {value} {nanos}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="softeq",
        description="Soft equality/difference constraint toolkit",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("eval", help="evaluate all cost metrics of an assignment")
    p.add_argument("instance")
    p.add_argument("assignment")
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("occ", help="print occurrence-count buckets")
    p.add_argument("instance")
    p.set_defaults(func=cmd_occ)

    p = sub.add_parser("crests", help="print the crest partition")
    p.add_argument("instance")
    p.set_defaults(func=cmd_crests)

    p = sub.add_parser("propagate-var-min", help="filter against a shared-value requirement")
    p.add_argument("instance")
    p.add_argument("--lo", type=int, required=True, help="required shared-value count")
    p.add_argument("--hi", type=int, default=None)
    p.add_argument("--mode", choices=["ac", "rc", "bc"], default="ac")
    p.set_defaults(func=cmd_propagate_var_min)

    p = sub.add_parser("filter-graph-min", help="filter against a disequality budget")
    p.add_argument("instance")
    p.add_argument("--max-diseq", type=int, required=True)
    p.add_argument("--min-diseq", type=int, default=0)
    p.add_argument("--no-crest-reduction", action="store_true")
    p.set_defaults(func=cmd_filter_graph_min)

    p = sub.add_parser("greedy", help="greedy lower bound on equal pairs")
    p.add_argument("instance")
    p.add_argument("--tie-break", default="smallest", help="smallest | list:<v1,v2,...>")
    p.set_defaults(func=cmd_greedy)

    p = sub.add_parser("solve", help="exact maximum of equal pairs")
    p.add_argument("instance")
    p.add_argument(
        "--method",
        required=True,
        choices=["dp", "matching", "heavy", "fpt", "fpt-conflict", "brute"],
    )
    p.add_argument("--budget", type=int, default=None, help="value-order budget")
    p.add_argument("--cap", type=int, default=None, help="exhaustive search cap")
    p.add_argument("--no-crest-reduction", action="store_true")
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("classify", help="report heavy and conflicting values")
    p.add_argument("instance")
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("reduce-3dm", help="emit the equal-pairs gadget of a triple-matching input")
    p.add_argument("instance")
    p.set_defaults(func=cmd_reduce_3dm)

    p = sub.add_parser("similar", help="propagate the similarity network of a multi instance")
    p.add_argument("instance")
    p.set_defaults(func=cmd_similar)

    p = sub.add_parser("generate", help="emit a deterministic random instance")
    p.add_argument(
        "--kind",
        required=True,
        choices=["set", "interval", "two-occ", "one-heavy", "3dm", "multi"],
    )
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--n", type=int, default=8)
    p.add_argument("--lam", type=int, default=8)
    p.add_argument("--dmax", type=int, default=4)
    p.add_argument("--heavy", type=int, default=1)
    p.add_argument("--qx", type=int, default=2)
    p.add_argument("--qy", type=int, default=2)
    p.add_argument("--qz", type=int, default=2)
    p.add_argument("--triples", type=int, default=4)
    p.add_argument("--copies", type=int, default=3)
    p.add_argument("--cost-max", type=int, default=6)
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_generate)

    p = sub.add_parser("bench", help="run methods over instance files")
    p.add_argument("instances", nargs="*")
    p.add_argument("--methods", required=True, help="comma-separated method list")
    p.add_argument("--reps", type=int, default=1)
    p.add_argument("--timing", action="store_true", help="include wall-clock nanoseconds")
    p.set_defaults(func=cmd_bench)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ParseError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (ContiguityError, PreconditionError, BudgetError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PRECONDITION
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
