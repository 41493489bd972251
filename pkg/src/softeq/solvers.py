"""Exact optimizers for the maximum-equal-pairs objective.

Two polynomial classes: when no value sits in more than two domains the
problem is a maximum matching on the variable intersection graph; when each
domain holds at most one value occurring three or more times ("heavy"),
greedily committing every heavy value first is optimal and the residue falls
back to matching.  Beyond those, enumerating value orders gives exact
solvers whose cost is exponential only in the number of values (or merely in
the number of mutually clashing heavy values).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from .matching import max_matching, matching_edges
from .model import (
    Assignment,
    BudgetError,
    Domain,
    Instance,
    PreconditionError,
    evaluate,
    pair_count,
)
from .occurrence import value_occurrences

DEFAULT_PERMUTATION_BUDGET = 3_628_800  # 10!

HEAVY_MIN_OCCURRENCES = 3


@dataclass(frozen=True)
class IntersectionGraph:
    """One vertex per variable; an edge wherever two domains share a value,
    tagged with the smallest shared value as witness."""

    names: tuple[str, ...]
    edges: dict[tuple[int, int], int]

    @classmethod
    def from_instance(cls, instance: Instance) -> "IntersectionGraph":
        containing: dict[int, list[int]] = {}
        for i, (_, dom) in enumerate(instance.items()):
            for v in dom.values():
                containing.setdefault(v, []).append(i)
        edges: dict[tuple[int, int], int] = {}
        for v in sorted(containing):
            holders = containing[v]
            for a, b in itertools.combinations(holders, 2):
                edges.setdefault((a, b), v)
        return cls(tuple(instance.variables), edges)

    def adjacency(self) -> list[list[int]]:
        adj: list[list[int]] = [[] for _ in self.names]
        for a, b in self.edges:
            adj[a].append(b)
            adj[b].append(a)
        return adj


@dataclass(frozen=True)
class ValueClassification:
    """heavy: values in three or more domains; conflicting: heavy values
    sharing some domain with another heavy value."""

    heavy: frozenset[int]
    conflicting: frozenset[int]


def classify_values(instance: Instance) -> ValueClassification:
    occ = value_occurrences(instance)
    heavy = {v for v in range(1, instance.lam + 1) if occ[v] >= HEAVY_MIN_OCCURRENCES}
    conflicting: set[int] = set()
    for _, dom in instance.items():
        present = [v for v in dom.values() if v in heavy]
        if len(present) >= 2:
            conflicting.update(present)
    return ValueClassification(frozenset(heavy), frozenset(conflicting))


def solve_matching_class(instance: Instance) -> tuple[int, Assignment]:
    """Exact optimum when every value occurs in at most two domains."""
    occ = value_occurrences(instance)
    for v in range(1, instance.lam + 1):
        if occ[v] > 2:
            raise PreconditionError(
                f"value {instance.original_value(v)} occurs in {occ[v]} domains; "
                "matching class needs at most two"
            )
    graph = IntersectionGraph.from_instance(instance)
    assert len(graph.edges) <= instance.lam
    mate = max_matching(instance.n, graph.adjacency())
    pairs = matching_edges(mate)
    values: dict[str, int] = {}
    for a, b in pairs:
        witness = graph.edges[(a, b)]
        values[instance.variables[a]] = witness
        values[instance.variables[b]] = witness
    for name, dom in instance.items():
        if name not in values:
            values[name] = dom.min
    s = Assignment.checked(instance, values)
    best = len(pairs)
    assert evaluate(instance, s).equalities == best
    return best, s


def solve_heavy_class(instance: Instance) -> tuple[int, Assignment]:
    """Exact optimum when each domain holds at most one heavy value.

    Stage one commits every heavy value to all domains containing it; the
    leftover variables form a matching-class instance.
    """
    occ = value_occurrences(instance)
    heavy = [v for v in range(1, instance.lam + 1) if occ[v] >= HEAVY_MIN_OCCURRENCES]
    heavy_set = set(heavy)
    values: dict[str, int] = {}
    for name, dom in instance.items():
        present = [v for v in dom.values() if v in heavy_set]
        if len(present) > 1:
            labels = [instance.original_value(v) for v in present]
            raise PreconditionError(
                f"domain of {name!r} holds heavy values {labels}; at most one allowed"
            )
        if present:
            values[name] = present[0]
    best = sum(pair_count(c) for c in _multiplicities(values).values())
    leftovers = [(name, dom) for name, dom in instance.items() if name not in values]
    if leftovers:
        residual = Instance.from_domains(leftovers, lam=instance.lam)
        sub_best, sub_assignment = solve_matching_class(residual)
        best += sub_best
        values.update(sub_assignment.values)
    s = Assignment.checked(instance, values)
    assert evaluate(instance, s).equalities == best
    return best, s


def _multiplicities(values: dict[str, int]) -> dict[int, int]:
    out: dict[int, int] = {}
    for v in values.values():
        out[v] = out.get(v, 0) + 1
    return out


@dataclass(frozen=True)
class ValueOrder:
    """Total order over values; earlier entries win when inducing a solution."""

    order: tuple[int, ...]

    def rank(self) -> dict[int, int]:
        return {v: i for i, v in enumerate(self.order)}


def induced_solution(instance: Instance, order: ValueOrder) -> Assignment:
    """Each variable takes its first domain value under the order."""
    if sorted(order.order) != list(range(1, instance.lam + 1)):
        raise ValueError("order must be a permutation of [1, lam]")
    rank = order.rank()
    values = {
        name: min(dom.values(), key=rank.__getitem__) for name, dom in instance.items()
    }
    return Assignment.checked(instance, values)


def _objective(values: dict[str, int]) -> int:
    return sum(pair_count(c) for c in _multiplicities(values).values())


def solve_fpt_values(
    instance: Instance, budget: int = DEFAULT_PERMUTATION_BUDGET
) -> tuple[int, Assignment]:
    """Exact optimum by trying every value order; cost grows with lam! only.

    Some optimal solution is induced by ranking values by their multiplicity
    in it, so scanning all orders cannot miss the optimum.
    """
    lam = instance.lam
    total = 1
    for i in range(2, lam + 1):
        total *= i
        if total > budget:
            raise BudgetError(
                f"{lam}! value orders exceed budget {budget}; "
                "try the conflicting-values solver or the interval DP"
            )
    ceiling = pair_count(instance.n)
    rank = [0] * (lam + 1)
    domain_values = [list(dom.values()) for _, dom in instance.items()]
    names = instance.variables
    best = -1
    best_values: dict[str, int] = {}
    for perm in itertools.permutations(range(1, lam + 1)):
        for i, v in enumerate(perm):
            rank[v] = i
        values = {
            name: min(vals, key=rank.__getitem__)
            for name, vals in zip(names, domain_values)
        }
        obj = _objective(values)
        if obj > best:
            best, best_values = obj, values
            if best == ceiling:
                break
    s = Assignment.checked(instance, best_values)
    assert evaluate(instance, s).equalities == best
    return best, s


def solve_fpt_conflicting(
    instance: Instance, budget: int = DEFAULT_PERMUTATION_BUDGET
) -> tuple[int, Assignment]:
    """Exact optimum enumerating orders of the conflicting values only.

    For each order, every domain holding several conflicting values keeps
    just the earliest of them; the surviving instance has at most one heavy
    value per domain and is solved exactly by the two-stage algorithm.
    """
    conflicting = sorted(classify_values(instance).conflicting)
    k = len(conflicting)
    total = 1
    for i in range(2, k + 1):
        total *= i
        if total > budget:
            raise BudgetError(f"{k}! conflict orders exceed budget {budget}")
    if not conflicting:
        return solve_heavy_class(instance)
    conflict_set = set(conflicting)
    best = -1
    best_assignment: Assignment | None = None
    for perm in itertools.permutations(conflicting):
        rank = {v: i for i, v in enumerate(perm)}
        surgered = []
        for name, dom in instance.items():
            present = [v for v in dom.values() if v in conflict_set]
            if len(present) >= 2:
                keep = min(present, key=rank.__getitem__)
                drop = set(present) - {keep}
                surgered.append(
                    (name, Domain.from_values(v for v in dom.values() if v not in drop))
                )
            else:
                surgered.append((name, dom))
        candidate = Instance.from_domains(surgered, lam=instance.lam)
        obj, s = solve_heavy_class(candidate)
        if obj > best:
            best, best_assignment = obj, s
    assert best_assignment is not None
    s = Assignment.checked(instance, best_assignment.values)
    assert evaluate(instance, s).equalities == best
    return best, s
