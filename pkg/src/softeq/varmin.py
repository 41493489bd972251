"""Filtering for the "many variables share one value" requirement.

The cost bounds describe how many variables must take a common value.  One
pass computes, per consistency level, the largest achievable shared count
k*, fails when the requirement exceeds it, tightens the upper bound to k*,
and prunes domains when the requirement pins the count to exactly k*.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum

from .model import ContiguityError, CostBounds, Domain, Instance
from .occurrence import inverse_occurrence, value_occurrences


class Mode(str, Enum):
    AC = "ac"
    RC = "rc"
    BC = "bc"


class Status(Enum):
    FAILED = "failed"
    FIXPOINT = "fixpoint"


@dataclass(frozen=True)
class PropagationOutcome:
    """Result of one propagator call.

    ``pruned`` holds only the domains that changed, each a non-empty subset
    of the old one.  ``cost`` carries the tightened bounds; on failure the
    input bounds are returned untouched.
    """

    status: Status
    pruned: dict[str, Domain] = field(default_factory=dict)
    cost: CostBounds | None = None

    @property
    def failed(self) -> bool:
        return self.status is Status.FAILED


def _shared_value_buckets(instance: Instance, mode: Mode) -> tuple[int, Domain | None]:
    """(k*, values achieving k*) per mode.

    AC counts per value across arbitrary domains; RC and BC run the interval
    sweep and therefore require single-interval domains.
    """
    if mode is Mode.AC:
        occ = value_occurrences(instance)
        kstar = max(occ[1:])
        if kstar == 0:
            return 0, None
        top = Domain.from_values(v for v in range(1, instance.lam + 1) if occ[v] == kstar)
        return kstar, top
    inv = inverse_occurrence(instance)
    kstar = inv.max_occupied
    if kstar == 0:
        return 0, None
    return kstar, Domain(inv.bucket(kstar))


def max_shared_occurrence(instance: Instance, mode: Mode = Mode.AC) -> int:
    """k*: the largest number of domains any single value appears in."""
    kstar, _ = _shared_value_buckets(instance, mode)
    return kstar


def propagate_var_min(
    instance: Instance, nprime: CostBounds, mode: Mode = Mode.AC
) -> PropagationOutcome:
    """Propagate ``nprime.lo <= (max shared count)``.

    Fails when even k* falls short of the requirement; otherwise tightens
    the upper bound to k* and, when the requirement equals k*, restricts
    every domain containing all top values to exactly those values (their
    hull only, in BC mode).
    """
    kstar, top = _shared_value_buckets(instance, mode)
    if nprime.lo > kstar:
        return PropagationOutcome(Status.FAILED, cost=nprime)
    new_hi = min(nprime.hi, kstar)
    pruned: dict[str, Domain] = {}
    if nprime.lo == kstar and top is not None:
        for name, dom in instance.items():
            if top.issubset(dom):
                new = top if mode is not Mode.BC else top.hull
                if new != dom:
                    pruned[name] = new
    return PropagationOutcome(Status.FIXPOINT, pruned, CostBounds(nprime.lo, new_hi))
