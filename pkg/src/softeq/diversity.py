"""Similarity across several copies of one problem.

A grid of k row copies over n columns carries a bound N on the summed
Hamming distance between row solutions.  Row-wise, that sum is the pairwise
distance total; column-wise, it is the sum over columns of within-column
unequal pairs, which lets each column be handled by the interval DP and its
filter.  The decomposition (one per-column constraint plus one sum
constraint) shares single variables only, so its constraint hypergraph has
no cycle and local filtering is globally complete.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

from .intervaldp import max_equalities_dp, rc_filter_graph_min
from .model import (
    CostBounds,
    Domain,
    Instance,
    ParseError,
    pair_count,
)
from .varmin import Status


def hamming(si: Sequence[int], sj: Sequence[int]) -> int:
    """Positions where the two value vectors differ."""
    if len(si) != len(sj):
        raise ValueError(f"length mismatch: {len(si)} vs {len(sj)}")
    return sum(1 for a, b in zip(si, sj) if a != b)


def sum_pairwise_distance(solutions: Sequence[Sequence[int]]) -> int:
    """Total Hamming distance over all row pairs."""
    if len(solutions) < 2:
        raise ValueError("need at least two solutions")
    total = 0
    for i in range(len(solutions)):
        for j in range(i + 1, len(solutions)):
            total += hamming(solutions[i], solutions[j])
    return total


def column_disequality_sum(solutions: Sequence[Sequence[int]]) -> int:
    """Same total, column by column: unequal pairs within each column."""
    k = len(solutions)
    n = len(solutions[0])
    total = 0
    for col in range(n):
        mults: dict[int, int] = {}
        for row in solutions:
            mults[row[col]] = mults.get(row[col], 0) + 1
        total += pair_count(k) - sum(pair_count(c) for c in mults.values())
    return total


class MultiInstance:
    """k copies of an n-column variable vector plus bounds on the summed
    distance.  Values are renamed jointly across the whole grid."""

    __slots__ = ("copies", "columns", "grid", "lam", "value_names", "objective")

    def __init__(
        self,
        copies: int,
        columns: Sequence[str],
        grid: dict[tuple[int, str], Domain],
        lam: int,
        objective: CostBounds,
        value_names: tuple[int, ...] | None = None,
    ):
        if copies < 2:
            raise ValueError("need at least two copies")
        if not columns:
            raise ValueError("need at least one column")
        for j in range(1, copies + 1):
            for name in columns:
                if (j, name) not in grid:
                    raise ValueError(f"missing domain for copy {j} of {name!r}")
        self.copies = copies
        self.columns = tuple(columns)
        self.grid = dict(grid)
        self.lam = lam
        self.objective = objective
        self.value_names = value_names

    @property
    def n(self) -> int:
        return len(self.columns)

    def cell_name(self, copy: int, column: str) -> str:
        return f"{copy}.{column}"

    def column_instance(self, column: str) -> Instance:
        pairs = [
            (self.cell_name(j, column), self.grid[(j, column)])
            for j in range(1, self.copies + 1)
        ]
        return Instance.from_domains(pairs, lam=self.lam)

    def original_value(self, v: int) -> int:
        return self.value_names[v - 1] if self.value_names else v

    def constraint_scopes(self) -> list[frozenset[str]]:
        """Scopes of the decomposition: one per column plus the sum."""
        scopes = [
            frozenset(
                {self.cell_name(j, c) for j in range(1, self.copies + 1)} | {f"N_{c}"}
            )
            for c in self.columns
        ]
        scopes.append(frozenset({f"N_{c}" for c in self.columns} | {"N"}))
        return scopes


def check_berge_acyclic(scopes: Iterable[Iterable[str]]) -> bool:
    """True when the constraint hypergraph has no cycle through shared
    variables, i.e. its constraint/variable incidence graph is a forest."""
    parent: dict[str, str] = {}

    def find(x: str) -> str:
        while parent.setdefault(x, x) != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for i, scope in enumerate(scopes):
        cnode = f"constraint#{i}"
        for var in set(scope):
            vnode = f"var#{var}"
            a, b = find(cnode), find(vnode)
            if a == b:
                return False
            parent[a] = b
    return True


@dataclass(frozen=True)
class MultiOutcome:
    """Joint propagation result: grid prunes, per-column bounds, total bound."""

    status: Status
    pruned: dict[tuple[int, str], Domain]
    total: CostBounds
    columns: dict[str, CostBounds]

    @property
    def failed(self) -> bool:
        return self.status is Status.FAILED


def propagate_cn_sim(multi: MultiInstance, verify_fixpoint: bool = False) -> MultiOutcome:
    """Filter the whole similarity network in one three-phase pass.

    Phase 1 raises each column's lower distance bound to what its best
    within-column agreement leaves.  Phase 2 runs interval arithmetic on the
    sum bound.  Phase 3 filters each column against its share of the slack.
    One pass reaches the fixpoint because the decomposition is cycle-free;
    ``verify_fixpoint`` reruns the pass to assert that when domains stayed
    intervals.
    """
    assert check_berge_acyclic(multi.constraint_scopes())
    k = multi.copies
    per_column_max = pair_count(k)
    col_bounds: dict[str, CostBounds] = {}
    for name in multi.columns:
        best, _ = max_equalities_dp(multi.column_instance(name))
        lo = per_column_max - best
        if lo > per_column_max:
            raise AssertionError("column bound above its ceiling")
        col_bounds[name] = CostBounds(lo, per_column_max)
    total_lo = max(multi.objective.lo, sum(b.lo for b in col_bounds.values()))
    if total_lo > multi.objective.hi:
        return MultiOutcome(Status.FAILED, {}, multi.objective, col_bounds)
    sum_lo = sum(b.lo for b in col_bounds.values())
    for name in multi.columns:
        b = col_bounds[name]
        slack = multi.objective.hi - (sum_lo - b.lo)
        new_hi = min(b.hi, slack)
        if new_hi < b.lo:
            return MultiOutcome(Status.FAILED, {}, multi.objective, col_bounds)
        col_bounds[name] = CostBounds(b.lo, new_hi)
    pruned: dict[tuple[int, str], Domain] = {}
    for name in multi.columns:
        outcome = rc_filter_graph_min(multi.column_instance(name), col_bounds[name])
        assert not outcome.failed, "column failure is caught by the sum phase"
        col_bounds[name] = outcome.cost
        for cell, dom in outcome.pruned.items():
            copy = int(cell.split(".", 1)[0])
            pruned[(copy, name)] = dom
    total = CostBounds(total_lo, multi.objective.hi)
    if verify_fixpoint and all(d.contiguous for d in pruned.values()):
        second = MultiInstance(
            multi.copies,
            multi.columns,
            {**multi.grid, **pruned},
            multi.lam,
            total,
            multi.value_names,
        )
        again = propagate_cn_sim(second, verify_fixpoint=False)
        assert not again.failed and not again.pruned
        assert again.total == total
    return MultiOutcome(Status.FIXPOINT, pruned, total, col_bounds)


def parse_multi_instance(text: str) -> MultiInstance:
    """Parse the ``copies`` header, per-copy ``var`` lines, and the optional
    ``cost max`` line; values are renamed jointly across the grid."""
    copies: int | None = None
    raw: list[tuple[int, str, list[int], int]] = []
    cost_max: int | None = None
    for lineno, line in enumerate(text.splitlines(), start=1):
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        parts = stripped.split()
        if parts[0] == "copies":
            if copies is not None:
                raise ParseError("duplicate 'copies' line", lineno)
            if len(parts) != 2 or not parts[1].isdigit():
                raise ParseError("expected 'copies <k>'", lineno)
            copies = int(parts[1])
            if copies < 2:
                raise ParseError("need at least two copies", lineno)
        elif parts[0] == "var":
            if copies is None:
                raise ParseError("'copies <k>' must come first", lineno)
            if len(parts) < 3 or "." not in parts[1]:
                raise ParseError("expected 'var <copy>.<name> set|interval ...'", lineno)
            head, column = parts[1].split(".", 1)
            if not head.isdigit() or not (1 <= int(head) <= copies):
                raise ParseError(f"copy index {head!r} out of range", lineno)
            kind = parts[2]
            try:
                args = [int(p) for p in parts[3:]]
            except ValueError as exc:
                raise ParseError(f"non-integer value: {exc}", lineno) from None
            if kind == "set":
                if not args:
                    raise ParseError(f"empty domain for {parts[1]!r}", lineno)
                if len(set(args)) != len(args):
                    raise ParseError(f"duplicate values for {parts[1]!r}", lineno)
                values = args
            elif kind == "interval":
                if len(args) != 2 or args[0] > args[1]:
                    raise ParseError("interval needs <lo> <hi> with lo <= hi", lineno)
                values = list(range(args[0], args[1] + 1))
            else:
                raise ParseError(f"unknown domain kind {kind!r}", lineno)
            raw.append((int(head), column, values, lineno))
        elif parts[0] == "cost":
            if len(parts) != 3 or parts[1] != "max":
                raise ParseError("expected 'cost max <N>'", lineno)
            cost_max = int(parts[2])
        else:
            raise ParseError(f"unknown directive {parts[0]!r}", lineno)
    if copies is None:
        raise ParseError("missing 'copies <k>' header")
    if not raw:
        raise ParseError("no variables declared")
    seen: set[tuple[int, str]] = set()
    for copy, column, _, lineno in raw:
        if (copy, column) in seen:
            raise ParseError(f"duplicate variable {copy}.{column}", lineno)
        seen.add((copy, column))
    columns: list[str] = []
    for _, column, _, _ in raw:
        if column not in columns:
            columns.append(column)
    for column in columns:
        for j in range(1, copies + 1):
            if (j, column) not in seen:
                raise ParseError(f"column {column!r} missing copy {j}")
    universe = sorted({v for _, _, values, _ in raw for v in values})
    rank = {v: i + 1 for i, v in enumerate(universe)}
    grid = {
        (copy, column): Domain.from_values(rank[v] for v in values)
        for copy, column, values, _ in raw
    }
    n = len(columns)
    ceiling = n * pair_count(copies)
    objective = CostBounds(0, cost_max if cost_max is not None else ceiling)
    return MultiInstance(copies, columns, grid, len(universe), objective, tuple(universe))
