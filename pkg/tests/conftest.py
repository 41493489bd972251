"""Shared builders for the test suite."""

from __future__ import annotations

from softeq import Domain, Instance, pair_count
from softeq.generate import SplitMix64


def interval_instance(*bounds: tuple[int, int], lam: int | None = None) -> Instance:
    """Instance from raw (lo, hi) pairs, without value renaming."""
    return Instance.from_domains(
        {f"X{i + 1}": Domain.interval(lo, hi) for i, (lo, hi) in enumerate(bounds)},
        lam=lam,
    )


def set_instance(*value_sets, lam: int | None = None) -> Instance:
    """Instance from raw value collections, without renaming."""
    return Instance.from_domains(
        {f"X{i + 1}": Domain.from_values(vs) for i, vs in enumerate(value_sets)},
        lam=lam,
    )


def random_interval_instance(rng: SplitMix64, n: int, lam: int) -> Instance:
    return interval_instance(
        *((lambda lo: (lo, rng.randint(lo, lam)))(rng.randint(1, lam)) for _ in range(n)),
        lam=lam,
    )


def random_set_instance(rng: SplitMix64, n: int, lam: int, dmax: int) -> Instance:
    sets = []
    for _ in range(n):
        size = rng.randint(1, min(dmax, lam))
        sets.append(rng.sample(lam, size))
    return set_instance(*sets, lam=lam)


def grid_conjunction_supports(multi, cap: int = 2_000_000) -> dict:
    """Range-support oracle for the whole similarity network.

    (copy, column, value) -> whether some grid completion drawn from the
    cell hulls keeps the summed within-column disequalities within the
    total bound.
    """
    from itertools import product

    cells = [(j, c) for c in multi.columns for j in range(1, multi.copies + 1)]
    hulls = {cell: list(multi.grid[cell].hull.values()) for cell in cells}
    size = 1
    for vals in hulls.values():
        size *= len(vals)
    assert size <= cap, "oracle grid too large"
    k = multi.copies
    per_col = pair_count(k)

    def total_diseq(assign: dict) -> int:
        total = 0
        for c in multi.columns:
            mults: dict[int, int] = {}
            for j in range(1, k + 1):
                v = assign[(j, c)]
                mults[v] = mults.get(v, 0) + 1
            total += per_col - sum(pair_count(x) for x in mults.values())
        return total

    supported: dict[tuple[int, str, int], bool] = {}
    order = list(cells)
    for combo in product(*(hulls[cell] for cell in order)):
        assign = dict(zip(order, combo))
        if total_diseq(assign) <= multi.objective.hi:
            for cell in order:
                v = assign[cell]
                if v in multi.grid[cell]:
                    supported[(cell[0], cell[1], v)] = True
    for j, c in cells:
        for v in multi.grid[(j, c)].values():
            supported.setdefault((j, c, v), False)
    return supported
