"""Exhaustive ground truth and the triple-matching test gadget.

Enumerators here favour being obviously correct over being clever: every
assignment is visited through a plain odometer whose statistics (value
multiplicities, running pair count, distinct-value count, largest
multiplicity) are maintained incrementally so even mid-sized sweeps stay
affordable.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from enum import Enum

from .model import (
    Assignment,
    BudgetError,
    CostBounds,
    Domain,
    Instance,
    pair_count,
)

DEFAULT_ENUMERATION_CAP = 10_000_000


def enumeration_size(instance: Instance) -> int:
    size = 1
    for _, dom in instance.items():
        size *= dom.size
    return size


@dataclass(frozen=True)
class BruteForceResult:
    best: int
    optima: tuple[Assignment, ...]

    @property
    def witness(self) -> Assignment:
        return self.optima[0]


def brute_force_optimum(
    instance: Instance,
    cap: int = DEFAULT_ENUMERATION_CAP,
    collect_optima: bool = True,
) -> BruteForceResult:
    """Maximum number of equal pairs over all assignments.

    Enumeration order is the odometer over the variable order with values
    ascending, so the reported optima list is deterministic and, when
    ``collect_optima`` is set, complete.
    """
    size = enumeration_size(instance)
    if size > cap:
        raise BudgetError(f"{size} assignments exceed cap {cap}")
    names = instance.variables
    value_lists = [list(dom.values()) for _, dom in instance.items()]
    n = len(value_lists)
    counts = [0] * (instance.lam + 1)
    idx = [0] * n
    cur = [vals[0] for vals in value_lists]
    eq = 0
    for v in cur:
        eq += counts[v]
        counts[v] += 1
    best = eq
    optima = [tuple(cur)]
    while True:
        p = n - 1
        while p >= 0 and idx[p] + 1 == len(value_lists[p]):
            p -= 1
        if p < 0:
            break
        for q in range(p, n):
            counts[cur[q]] -= 1
            eq -= counts[cur[q]]
        idx[p] += 1
        for q in range(p + 1, n):
            idx[q] = 0
        for q in range(p, n):
            v = value_lists[q][idx[q]]
            cur[q] = v
            eq += counts[v]
            counts[v] += 1
        if eq > best:
            best = eq
            optima = [tuple(cur)]
        elif eq == best and collect_optima:
            optima.append(tuple(cur))
    assignments = tuple(
        Assignment(dict(zip(names, vals))) for vals in optima
    )
    return BruteForceResult(best, assignments)


class CostKind(Enum):
    """The six cost inequalities, each relating the cost variable N to one
    statistic of the assignment."""

    ALLDIFF_VAR_MIN = "alldiff-var-min"      # N >= n - distinct
    ALLDIFF_VAR_MAX = "alldiff-var-max"      # N <= n - distinct
    DIFF_GRAPH_MIN = "diff-graph-min"        # N >= equal pairs
    EQUAL_GRAPH_MIN = "equal-graph-min"      # N >= unequal pairs
    EQUAL_VAR_MIN = "equal-var-min"          # N >= n - largest multiplicity
    EQUAL_VAR_MAX = "equal-var-max"          # N <= n - largest multiplicity


def _cost_and_direction(kind: CostKind, n: int):
    """(statistic extractor, True when N upper-bounds admissibility).

    For ``N >= cost`` constraints a completion is admissible iff its cost is
    at most ``bounds.hi``; for ``N <= cost`` iff at least ``bounds.lo``.
    """
    if kind is CostKind.ALLDIFF_VAR_MIN:
        return (lambda eq, nv, mx: n - nv), True
    if kind is CostKind.ALLDIFF_VAR_MAX:
        return (lambda eq, nv, mx: n - nv), False
    if kind is CostKind.DIFF_GRAPH_MIN:
        return (lambda eq, nv, mx: eq), True
    if kind is CostKind.EQUAL_GRAPH_MIN:
        return (lambda eq, nv, mx: pair_count(n) - eq), True
    if kind is CostKind.EQUAL_VAR_MIN:
        return (lambda eq, nv, mx: n - mx), True
    if kind is CostKind.EQUAL_VAR_MAX:
        return (lambda eq, nv, mx: n - mx), False
    raise ValueError(kind)


def brute_force_supports(
    instance: Instance,
    kind: CostKind,
    bounds: CostBounds,
    support_kind: str = "domain",
) -> dict[tuple[str, int], bool]:
    """(variable, value) -> can the rest complete it within the cost bounds?

    ``support_kind="domain"`` draws completions from the other variables'
    domains, ``"range"`` from their min..max hulls.  The candidate value
    itself always comes from the variable's actual domain.
    """
    if support_kind not in ("domain", "range"):
        raise ValueError(f"unknown support kind {support_kind!r}")
    n = instance.n
    cost_of, upper = _cost_and_direction(kind, n)

    def admissible(eq: int, nv: int, mx: int) -> bool:
        c = cost_of(eq, nv, mx)
        return c <= bounds.hi if upper else c >= bounds.lo

    names = list(instance.variables)
    result: dict[tuple[str, int], bool] = {}
    for target, target_dom in instance.items():
        candidates = list(target_dom.values())
        supported = {v: False for v in candidates}
        others = [
            list((dom if support_kind == "domain" else dom.hull).values())
            for name, dom in instance.items()
            if name != target
        ]
        size = 1
        for vals in others:
            size *= len(vals)
        if size * max(1, len(candidates)) > DEFAULT_ENUMERATION_CAP:
            raise BudgetError("support enumeration too large")
        pending = len(candidates)
        for combo in _iter_with_stats(others, instance.lam):
            counts, eq, nv, mx = combo
            for v in candidates:
                if supported[v]:
                    continue
                cv = counts[v]
                if admissible(eq + cv, nv + (1 if cv == 0 else 0), max(mx, cv + 1)):
                    supported[v] = True
                    pending -= 1
            if pending == 0:
                break
        for v in candidates:
            result[(target, v)] = supported[v]
    return result


def _iter_with_stats(value_lists: list[list[int]], lam: int):
    """Yield (counts, equal pairs, distinct count, max multiplicity) for every
    combination of the given value lists, via an incremental odometer."""
    counts = [0] * (lam + 1)
    if not value_lists:
        yield counts, 0, 0, 0
        return
    n = len(value_lists)
    idx = [0] * n
    cur = [vals[0] for vals in value_lists]
    eq = nv = mx = 0
    for v in cur:
        eq += counts[v]
        counts[v] += 1
        if counts[v] == 1:
            nv += 1
        if counts[v] > mx:
            mx = counts[v]
    yield counts, eq, nv, mx
    while True:
        p = n - 1
        while p >= 0 and idx[p] + 1 == len(value_lists[p]):
            p -= 1
        if p < 0:
            return
        for q in range(p, n):
            counts[cur[q]] -= 1
            eq -= counts[cur[q]]
            if counts[cur[q]] == 0:
                nv -= 1
        idx[p] += 1
        for q in range(p + 1, n):
            idx[q] = 0
        for q in range(p, n):
            v = value_lists[q][idx[q]]
            cur[q] = v
            eq += counts[v]
            counts[v] += 1
            if counts[v] == 1:
                nv += 1
        mx = max(counts)
        yield counts, eq, nv, mx


@dataclass(frozen=True)
class ThreeDMInstance:
    """Triple-matching input: three disjoint element sets and triples over
    their product; the optional target is the matching size asked about."""

    x: tuple[str, ...]
    y: tuple[str, ...]
    z: tuple[str, ...]
    triples: tuple[tuple[str, str, str], ...]
    target: int | None = None

    def __post_init__(self) -> None:
        groups = [set(self.x), set(self.y), set(self.z)]
        if len(self.x) + len(self.y) + len(self.z) != len(set().union(*groups)):
            raise ValueError("element sets must be disjoint and duplicate-free")
        for t in self.triples:
            if t[0] not in groups[0] or t[1] not in groups[1] or t[2] not in groups[2]:
                raise ValueError(f"triple {t} references unknown elements")

    @property
    def elements(self) -> tuple[str, ...]:
        return self.x + self.y + self.z


def brute_force_3dm(tdm: ThreeDMInstance, cap: int = 20) -> int:
    """Largest coordinate-disjoint subset of the triples, by full recursion."""
    if len(tdm.triples) > cap:
        raise BudgetError(f"{len(tdm.triples)} triples exceed cap {cap}")
    triples = list(tdm.triples)
    used: set[str] = set()

    def explore(i: int) -> int:
        if i == len(triples):
            return 0
        best = explore(i + 1)
        a, b, c = triples[i]
        if a not in used and b not in used and c not in used:
            used.update((a, b, c))
            best = max(best, 1 + explore(i + 1))
            used.difference_update((a, b, c))
        return best

    return explore(0)


def reduce_3dm(tdm: ThreeDMInstance) -> Instance:
    """Equal-pairs instance whose optimum encodes the best triple matching.

    One variable per element.  Triple number l lands in the domains of its
    three members; every element pair (i, j), i < j, additionally shares the
    value ``len(triples) + (i-1)*n + j``.  No value ends up in more than
    three domains.
    """
    elements = tdm.elements
    n = len(elements)
    index = {name: i + 1 for i, name in enumerate(elements)}
    raw: dict[str, set[int]] = {name: set() for name in elements}
    for l, (a, b, c) in enumerate(tdm.triples, start=1):
        raw[a].add(l)
        raw[b].add(l)
        raw[c].add(l)
    base = len(tdm.triples)
    for i in range(1, n + 1):
        for j in range(i + 1, n + 1):
            v = base + (i - 1) * n + j
            raw[elements[i - 1]].add(v)
            raw[elements[j - 1]].add(v)
    occurrences: dict[int, int] = {}
    for vals in raw.values():
        for v in vals:
            occurrences[v] = occurrences.get(v, 0) + 1
    assert all(c <= 3 for c in occurrences.values())
    ordered = sorted(raw.items(), key=lambda kv: index[kv[0]])
    return Instance.normalize(ordered)


def parse_3dm(text: str) -> ThreeDMInstance:
    """Parse ``elem x|y|z <name>`` and ``triple <x> <y> <z>`` lines."""
    from .model import ParseError

    groups: dict[str, list[str]] = {"x": [], "y": [], "z": []}
    triples: list[tuple[str, str, str]] = []
    target: int | None = None
    for lineno, line in enumerate(text.splitlines(), start=1):
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        parts = stripped.split()
        if parts[0] == "elem":
            if len(parts) != 3 or parts[1] not in groups:
                raise ParseError("expected 'elem x|y|z <name>'", lineno)
            groups[parts[1]].append(parts[2])
        elif parts[0] == "triple":
            if len(parts) != 4:
                raise ParseError("expected 'triple <x> <y> <z>'", lineno)
            triples.append((parts[1], parts[2], parts[3]))
        elif parts[0] == "target":
            if len(parts) != 2:
                raise ParseError("expected 'target <K>'", lineno)
            target = int(parts[1])
        else:
            raise ParseError(f"unknown directive {parts[0]!r}", lineno)
    try:
        return ThreeDMInstance(
            tuple(groups["x"]), tuple(groups["y"]), tuple(groups["z"]),
            tuple(triples), target,
        )
    except ValueError as exc:
        raise ParseError(str(exc)) from None
