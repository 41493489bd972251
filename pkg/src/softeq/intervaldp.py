"""Maximum pairwise equalities over single-interval domains.

A triangular table ranges over value windows [a, b]: its cell holds the best
number of equal pairs achievable by the variables whose domains fit inside
the window.  Choosing the window's dominant value c splits the remainder
into independent sub-windows left and right of c, so cells combine by

    best[a][b] = max over c in [a, b] of
        pairs(count of fitting domains containing c) + best[a][c-1] + best[c+1][b]

Witnesses are rebuilt from the recorded c choices.  A crest preprocessing
pass can first shrink the value axis to at most n values without changing
the optimum.
"""

from __future__ import annotations

import os
from dataclasses import dataclass

from .model import (
    Assignment,
    BudgetError,
    ContiguityError,
    CostBounds,
    Domain,
    Instance,
    evaluate,
    pair_count,
)
from .occurrence import CrestPartition, crest_partition, reduce_by_crests
from .varmin import PropagationOutcome, Status

DEFAULT_MAX_CELLS = 25_000_000


def _require_contiguous(instance: Instance) -> None:
    for name, dom in instance.items():
        if not dom.contiguous:
            raise ContiguityError(name)


class DPTable:
    """Triangular cost/choice tables over value windows ``1 <= a <= b <= lam``."""

    __slots__ = ("lam", "_best", "_pick")

    def __init__(self, lam: int):
        self.lam = lam
        self._best = [[0] * (lam - a + 1) for a in range(1, lam + 1)]
        self._pick = [[0] * (lam - a + 1) for a in range(1, lam + 1)]

    def cost(self, a: int, b: int) -> int:
        if b < a:
            return 0
        return self._best[a - 1][b - a]

    def choice(self, a: int, b: int) -> int:
        return self._pick[a - 1][b - a]

    def _set(self, a: int, b: int, best: int, pick: int) -> None:
        self._best[a - 1][b - a] = best
        self._pick[a - 1][b - a] = pick


def count_enclosing(instance: Instance, a: int, b: int, c: int) -> int:
    """Variables whose whole domain fits in [a, b] and contains c."""
    if not (a <= c <= b):
        raise ValueError(f"need a <= c <= b, got {a}, {c}, {b}")
    _require_contiguous(instance)
    total = 0
    for _, dom in instance.items():
        if a <= dom.min and dom.max <= b and dom.min <= c <= dom.max:
            total += 1
    return total


def build_table(instance: Instance, max_cells: int | None = None) -> DPTable:
    """Fill the window table bottom-up, shorter windows first."""
    _require_contiguous(instance)
    lam = instance.lam
    if max_cells is None:
        max_cells = int(os.environ.get("SOFTEQ_DP_MAX_CELLS", DEFAULT_MAX_CELLS))
    if 2 * lam * lam > max_cells:
        raise BudgetError(
            f"table needs {2 * lam * lam} cells, cap is {max_cells}; "
            "enable crest reduction or raise SOFTEQ_DP_MAX_CELLS"
        )
    bounds = [(d.min, d.max) for _, d in instance.items()]
    table = DPTable(lam)
    delta = [0] * (lam + 2)  # scratch, cleared per window
    for span in range(lam):
        for a in range(1, lam - span + 1):
            b = a + span
            for lo, hi in bounds:
                if a <= lo and hi <= b:
                    delta[lo] += 1
                    delta[hi + 1] -= 1
            best = -1
            pick = a
            inside = 0
            for c in range(a, b + 1):
                inside += delta[c]
                val = pair_count(inside) + table.cost(a, c - 1) + table.cost(c + 1, b)
                if val > best:
                    best, pick = val, c
            table._set(a, b, best, pick)
            for c in range(a, b + 2):
                delta[c] = 0
    return table


def _reconstruct(instance: Instance, table: DPTable, a: int, b: int, out: dict[str, int]) -> None:
    if b < a:
        return
    c = table.choice(a, b)
    for name, dom in instance.items():
        if name not in out and a <= dom.min and dom.max <= b and dom.min <= c <= dom.max:
            out[name] = c
    _reconstruct(instance, table, a, c - 1, out)
    _reconstruct(instance, table, c + 1, b, out)


def _translate_crest_witness(
    instance: Instance, part: CrestPartition, reduced_witness: Assignment
) -> Assignment:
    """Map crest-rank values back to one concrete common value per group.

    All domains overlapping one crest pairwise intersect, so the largest of
    their lower endpoints lies in every one of them.
    """
    groups: dict[int, list[str]] = {}
    for name, rank in reduced_witness.items():
        groups.setdefault(rank, []).append(name)
    values: dict[str, int] = {}
    for rank, members in groups.items():
        common = max(instance.domain(name).min for name in members)
        assert all(common in instance.domain(name) for name in members)
        for name in members:
            values[name] = common
    return Assignment.checked(instance, values)


def max_equalities_dp(
    instance: Instance,
    use_crest_reduction: bool = True,
    max_cells: int | None = None,
) -> tuple[int, Assignment]:
    """Exact optimum number of equal pairs plus a witness attaining it."""
    _require_contiguous(instance)
    if use_crest_reduction:
        part = crest_partition(instance)
        reduced = reduce_by_crests(instance, part)
        table = build_table(reduced, max_cells=max_cells)
        best = table.cost(1, reduced.lam)
        raw: dict[str, int] = {}
        _reconstruct(reduced, table, 1, reduced.lam, raw)
        witness = _translate_crest_witness(instance, part, Assignment(raw))
    else:
        table = build_table(instance, max_cells=max_cells)
        best = table.cost(1, instance.lam)
        raw = {}
        _reconstruct(instance, table, 1, instance.lam, raw)
        witness = Assignment.checked(instance, raw)
    assert evaluate(instance, witness).equalities == best
    return best, witness


def rc_filter_graph_min(
    instance: Instance,
    n_bounds: CostBounds,
    use_crest_reduction: bool = True,
    max_cells: int | None = None,
) -> PropagationOutcome:
    """Filter against an upper bound on the number of unequal pairs.

    The bound caps disequalities, so at least ``pairs(n) - n_bounds.hi``
    equalities are required.  Fails when the optimum cannot reach that;
    otherwise keeps exactly the values whose unit assignment still allows
    it, one optimum call per value.
    """
    _require_contiguous(instance)
    total = pair_count(instance.n)
    optimum, _ = max_equalities_dp(instance, use_crest_reduction, max_cells)
    new_lo = max(n_bounds.lo, total - optimum)
    if new_lo > n_bounds.hi:
        return PropagationOutcome(Status.FAILED, cost=n_bounds)
    required = total - n_bounds.hi
    pruned: dict[str, Domain] = {}
    if required > 0:
        for name, dom in instance.items():
            kept = [
                v
                for v in dom.values()
                if max_equalities_dp(
                    instance.restricted(name, Domain.interval(v, v)),
                    use_crest_reduction,
                    max_cells,
                )[0]
                >= required
            ]
            assert kept, "a value of every variable survives when not failed"
            new = Domain.from_values(kept)
            if new != dom:
                pruned[name] = new
    return PropagationOutcome(Status.FIXPOINT, pruned, CostBounds(new_lo, n_bounds.hi))
