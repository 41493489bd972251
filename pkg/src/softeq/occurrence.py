"""Occurrence profile of an instance over single-interval domains.

``occ(v)`` counts the domains containing value v.  Its discrete derivative is
kept as a sorted event list whose keys double the value axis so half steps
stay integral: value v maps to key ``2*v`` and ``v + 1/2`` to ``2*v + 1``.
On top of it sit the inverse mapping (occurrence count -> value intervals)
and the crest decomposition (maximal stretches where occ rises then falls).
"""

from __future__ import annotations

import math
from bisect import bisect_left, bisect_right
from dataclasses import dataclass

from .model import ContiguityError, Domain, Instance


class DeltaList:
    """Sorted association list of ``(key, signed count)`` coverage events.

    Entries merge on equal keys and vanish when the merged count is zero;
    insertion keeps the list ordered via binary search.
    """

    __slots__ = ("events",)

    def __init__(self) -> None:
        self.events: list[tuple[int, int]] = []

    def add(self, key: int, delta: int) -> None:
        i = bisect_left(self.events, (key,))
        if i < len(self.events) and self.events[i][0] == key:
            merged = self.events[i][1] + delta
            if merged:
                self.events[i] = (key, merged)
            else:
                del self.events[i]
        elif delta:
            self.events.insert(i, (key, delta))

    def total(self) -> int:
        return sum(d for _, d in self.events)

    def __iter__(self):
        return iter(self.events)

    def __len__(self) -> int:
        return len(self.events)


def build_delta(instance: Instance, half_open: bool = False) -> DeltaList:
    """Coverage events of all domains.

    Each domain [lo, hi] contributes +1 at ``lo`` and -1 either at ``hi + 1``
    (``half_open=False``) or at ``hi + 1/2`` (``half_open=True``).  Requires
    every domain to be a single interval.
    """
    delta = DeltaList()
    for name, dom in instance.items():
        if not dom.contiguous:
            raise ContiguityError(name)
        delta.add(2 * dom.min, +1)
        if half_open:
            delta.add(2 * dom.max + 1, -1)
        else:
            delta.add(2 * (dom.max + 1), -1)
    return delta


@dataclass(frozen=True)
class InverseOcc:
    """Occurrence count -> disjoint value intervals with exactly that count.

    The intervals across all buckets partition ``[1, lam]``; values covered
    by no domain (possible on instances built without normalization) land in
    bucket 0.
    """

    buckets: dict[int, tuple[tuple[int, int], ...]]

    def bucket(self, count: int) -> tuple[tuple[int, int], ...]:
        return self.buckets.get(count, ())

    @property
    def max_occupied(self) -> int:
        return max((c for c, ivs in self.buckets.items() if ivs and c > 0), default=0)


def _inverse_from_events(instance: Instance) -> dict[int, list[tuple[int, int]]]:
    delta = build_delta(instance, half_open=False)
    buckets: dict[int, list[tuple[int, int]]] = {}
    occ = 0
    cur = 1
    for key, d in delta:
        v = key // 2
        if v > cur:
            buckets.setdefault(occ, []).append((cur, v - 1))
        occ += d
        cur = v
    assert occ == 0, "unbalanced coverage events"
    if cur <= instance.lam:
        buckets.setdefault(0, []).append((cur, instance.lam))
    return buckets


def _inverse_from_array(instance: Instance) -> dict[int, list[tuple[int, int]]]:
    lam = instance.lam
    diff = [0] * (lam + 2)
    for name, dom in instance.items():
        if not dom.contiguous:
            raise ContiguityError(name)
        diff[dom.min] += 1
        diff[dom.max + 1] -= 1
    buckets: dict[int, list[tuple[int, int]]] = {}
    occ = 0
    run_start = 1
    run_occ = None
    for v in range(1, lam + 1):
        occ += diff[v]
        if run_occ is None:
            run_occ, run_start = occ, v
        elif occ != run_occ:
            buckets.setdefault(run_occ, []).append((run_start, v - 1))
            run_occ, run_start = occ, v
    if run_occ is not None:
        buckets.setdefault(run_occ, []).append((run_start, lam))
    return buckets


def inverse_occurrence(instance: Instance, backend: str = "auto") -> InverseOcc:
    """Bucket every value of ``[1, lam]`` by its occurrence count.

    ``backend="auto"`` picks the array sweep when ``lam < n*log2(n)`` and the
    event-list sweep otherwise; both produce identical buckets.
    """
    if backend == "auto":
        n = instance.n
        backend = "array" if instance.lam < n * math.log2(max(n, 2)) else "list"
    if backend == "array":
        raw = _inverse_from_array(instance)
    elif backend == "list":
        raw = _inverse_from_events(instance)
    else:
        raise ValueError(f"unknown backend {backend!r}")
    return InverseOcc({c: tuple(ivs) for c, ivs in raw.items() if ivs})


def value_occurrences(instance: Instance) -> list[int]:
    """occ(v) for every value, tolerating union domains.  Index 0 unused."""
    lam = instance.lam
    diff = [0] * (lam + 2)
    for _, dom in instance.items():
        for lo, hi in dom.intervals:
            diff[lo] += 1
            diff[hi + 1] -= 1
    occ = [0] * (lam + 1)
    run = 0
    for v in range(1, lam + 1):
        run += diff[v]
        occ[v] = run
    return occ


@dataclass(frozen=True)
class CrestPartition:
    """Adjacent intervals covering ``[1, lam]``, each a crest of occ: the
    profile (sampled over half steps) rises to a peak and then falls."""

    crests: tuple[tuple[int, int], ...]

    def __len__(self) -> int:
        return len(self.crests)

    def index_of(self, value: int) -> int:
        """1-based rank of the crest containing the value."""
        i = bisect_right(self.crests, (value, float("inf")))
        if i == 0 or not (self.crests[i - 1][0] <= value <= self.crests[i - 1][1]):
            raise ValueError(f"value {value} outside the partition")
        return i


def crest_partition(instance: Instance) -> CrestPartition:
    """Split ``[1, lam]`` into crests by sweeping the half-open event list.

    Polarity turns negative at the first -1 event of a crest; the next +1
    event ends that crest just before itself: a rise at key ``a`` puts the
    boundary at value ``ceil(a/2) - 1``.  Zero-coverage plateaus are absorbed
    into the preceding crest's falling tail.
    """
    delta = build_delta(instance, half_open=True)
    crests: list[tuple[int, int]] = []
    start = 1
    falling = False
    for key, d in delta:
        if d < 0:
            falling = True
        elif falling:
            end = (key + 1) // 2 - 1
            crests.append((start, end))
            start = end + 1
            falling = False
    crests.append((start, instance.lam))
    assert len(crests) <= instance.n
    return CrestPartition(tuple(crests))


def reduce_by_crests(instance: Instance, part: CrestPartition) -> Instance:
    """Shrink the value axis to crest ranks.

    Each domain becomes the contiguous run of crest indices it overlaps; the
    reduced instance preserves the maximum number of equal pairs.
    """
    domains = []
    used = set()
    for name, dom in instance.items():
        if not dom.contiguous:
            raise ContiguityError(name)
        lo = part.index_of(dom.min)
        hi = part.index_of(dom.max)
        assert lo <= hi
        used.update(range(lo, hi + 1))
        domains.append((name, Domain.interval(lo, hi)))
    assert used == set(range(1, len(part) + 1)), "every crest overlaps a domain"
    return Instance.from_domains(domains, lam=len(part))
