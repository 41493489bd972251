"""Greedy lower bound on the maximum number of equal pairs.

Repeatedly pick a value contained in the largest number k of unassigned
domains, assign all k of them to it, and bank ``k*(k-1)/2`` pairs; stop when
no value reaches two domains.  The certified total is never less than half
the optimum, and the whole run is near-linear in the instance size.

State lives in occurrence buckets: ``val[k]`` lists the values currently in
exactly k unassigned domains, with an index array giving each value's slot
so moves between buckets are O(1).  The scan level k only ever decreases and
values only ever move to lower buckets, so the bucket at the current level
can be snapshotted and sorted once per level to serve deterministic picks.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from typing import Sequence

from .model import Assignment, Instance, pair_count


class TieBreak:
    """Deterministic pick policy: listed values first (in list order), then
    everything else by ascending value."""

    def __init__(self, preferred: Sequence[int] = ()):
        self.preferred = tuple(preferred)
        self._rank = {v: i for i, v in enumerate(self.preferred)}

    def key(self, value: int) -> tuple[int, int]:
        return (self._rank.get(value, len(self._rank)), value)

    @classmethod
    def smallest(cls) -> "TieBreak":
        return cls()


class GreedyState:
    """Mutable occurrence bookkeeping for one run.

    ``var[v]`` lists the variables whose domain contains v (never cleaned;
    assignment is the staleness signal).  ``occ[v]`` counts the unassigned
    ones.  ``val[k]`` holds the values with ``occ == k``; ``pos[v]`` is v's
    slot in its bucket, or None once v has been picked.  Bucket removal
    swaps the tail into the slot, so add/remove are O(1).
    """

    __slots__ = ("instance", "var", "occ", "val", "pos", "ops", "pairs_processed")

    def __init__(self, instance: Instance):
        lam, n = instance.lam, instance.n
        self.instance = instance
        self.var: list[list[int]] = [[] for _ in range(lam + 1)]
        self.occ = [0] * (lam + 1)
        self.val: list[list[int]] = [[] for _ in range(n + 1)]
        self.pos: list[int | None] = [None] * (lam + 1)
        self.pairs_processed = 0
        var, occ = self.var, self.occ
        for i, (_, dom) in enumerate(instance.items()):
            for lo, hi in dom.intervals:
                for v in range(lo, hi + 1):
                    var[v].append(i)
                    occ[v] += 1
        for v in range(1, lam + 1):
            if occ[v]:
                self._bucket_add(v, occ[v])
        self.ops = instance.m + lam

    def _bucket_add(self, v: int, k: int) -> None:
        bucket = self.val[k]
        self.pos[v] = len(bucket)
        bucket.append(v)

    def _bucket_remove(self, v: int, k: int) -> None:
        bucket = self.val[k]
        slot = self.pos[v]
        last = bucket.pop()
        if last != v:
            bucket[slot] = last
            self.pos[last] = slot
        self.pos[v] = None

    def demote(self, v: int) -> None:
        """Move v one bucket down after losing an unassigned domain."""
        k = self.occ[v]
        self._bucket_remove(v, k)
        self.occ[v] = k - 1
        self._bucket_add(v, k - 1)
        self.ops += 1


@dataclass(frozen=True)
class GreedyResult:
    lower_bound: int
    assignment: Assignment
    objective: int
    ops: int
    pairs_processed: int


def greedy_max_equalities(
    instance: Instance, tie_break: TieBreak | None = None, verify_state: bool = False
) -> GreedyResult:
    """Run the greedy rounds and finish the leftovers.

    Leftover variables (once no value reaches two unassigned domains) take
    the tie-break-first value of their own domain and contribute nothing to
    the certified bound; the true objective of the final assignment is
    reported separately and can only be larger.
    """
    policy = tie_break or TieBreak.smallest()
    state = GreedyState(instance)
    names = instance.variables
    domains = [dom for _, dom in instance.items()]
    domain_values = [list(dom.values()) for dom in domains]
    pos, occ, val, var = state.pos, state.occ, state.val, state.var
    ops = state.ops
    pairs = 0
    pairs_at_round_start = 0
    chosen: dict[int, int] = {}
    bound = 0
    k = instance.n
    snapshot: list[int] = []
    snapshot_at = -1
    cursor = 0
    while k > 1:
        if not val[k]:
            k -= 1
            ops += 1
            continue
        if snapshot_at != k:
            snapshot = sorted(val[k], key=policy.key)
            snapshot_at = k
            cursor = 0
            size = len(snapshot)
            ops += size * max(1, size.bit_length())
        v = None
        while cursor < len(snapshot):
            cand = snapshot[cursor]
            cursor += 1
            ops += 1
            if pos[cand] is not None and occ[cand] == k:
                v = cand
                break
        assert v is not None, "non-empty bucket must appear in its level snapshot"
        state._bucket_remove(v, k)
        for i in var[v]:
            ops += 1
            if i in chosen:
                continue
            for w in domain_values[i]:
                if w == v:
                    continue
                pairs += 1
                slot = pos[w]
                if slot is not None:
                    kw = occ[w]
                    bucket = val[kw]
                    last = bucket.pop()
                    if last != w:
                        bucket[slot] = last
                        pos[last] = slot
                    kw -= 1
                    occ[w] = kw
                    target = val[kw]
                    pos[w] = len(target)
                    target.append(w)
            chosen[i] = v
        ops += 2 * (pairs - pairs_at_round_start)  # one step examined, one moved
        pairs_at_round_start = pairs
        bound += pair_count(k)
        if verify_state:
            _assert_counts_consistent(state, domains, chosen)
    state.pairs_processed = pairs
    for i, dom in enumerate(domains):
        if i not in chosen:
            chosen[i] = min(dom.values(), key=policy.key)
            ops += dom.size
    state.ops = ops
    values = {names[i]: v for i, v in chosen.items()}
    assignment = Assignment.checked(instance, values)
    objective = report_objective(assignment)
    assert objective >= bound
    return GreedyResult(bound, assignment, objective, state.ops, state.pairs_processed)


def _assert_counts_consistent(
    state: GreedyState, domains: list, chosen: dict[int, int]
) -> None:
    """Slow test hook: every bucketed value's count matches a fresh count of
    the unassigned domains containing it."""
    for v in range(1, state.instance.lam + 1):
        if state.pos[v] is None:
            continue
        live = sum(1 for i, dom in enumerate(domains) if i not in chosen and v in dom)
        assert state.occ[v] == live, f"stale count for value {v}"


def report_objective(s: Assignment) -> int:
    """True number of equal pairs in an assignment."""
    return sum(pair_count(c) for c in Counter(s.values.values()).values())
