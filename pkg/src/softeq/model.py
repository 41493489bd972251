"""Core problem model: union-of-interval domains, normalized instances,
assignments, and exact evaluation of the pairwise equality/difference costs.

Values are renamed at parse time to the dense range ``[1, lam]`` while the
original integer labels are kept for output.  All counters are exact Python
integers, so pair counts like ``n*(n-1)//2`` never overflow.
"""

from __future__ import annotations

from bisect import bisect_right
from collections import Counter
from dataclasses import dataclass
from typing import Iterable, Iterator, Mapping


class SofteqError(Exception):
    """Base class for all errors raised by this package."""


class ParseError(SofteqError):
    """Malformed instance text."""

    def __init__(self, message: str, line: int | None = None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line


class ContiguityError(SofteqError):
    """An operation that needs single-interval domains met a union domain."""

    def __init__(self, variable: str):
        super().__init__(f"domain of {variable!r} is not a single interval")
        self.variable = variable


class PreconditionError(SofteqError):
    """A solver was handed an instance outside its declared class."""


class BudgetError(SofteqError):
    """An enumeration or table would exceed its configured budget."""


def pair_count(x: int) -> int:
    """Number of unordered pairs among x items."""
    return x * (x - 1) // 2


@dataclass(frozen=True)
class Domain:
    """Non-empty set of integers stored as sorted, disjoint, non-adjacent
    closed intervals ``(lo, hi)``."""

    intervals: tuple[tuple[int, int], ...]

    def __post_init__(self) -> None:
        if not self.intervals:
            raise ValueError("domain must be non-empty")
        prev_hi: int | None = None
        for lo, hi in self.intervals:
            if lo > hi:
                raise ValueError(f"bad interval [{lo}, {hi}]")
            if prev_hi is not None and lo <= prev_hi + 1:
                raise ValueError("intervals must be disjoint and non-adjacent")
            prev_hi = hi

    @classmethod
    def interval(cls, lo: int, hi: int) -> "Domain":
        return cls(((lo, hi),))

    @classmethod
    def from_values(cls, values: Iterable[int]) -> "Domain":
        """Canonicalize an arbitrary value collection into intervals."""
        vals = sorted(set(values))
        if not vals:
            raise ValueError("domain must be non-empty")
        ivs: list[tuple[int, int]] = []
        lo = hi = vals[0]
        for v in vals[1:]:
            if v == hi + 1:
                hi = v
            else:
                ivs.append((lo, hi))
                lo = hi = v
        ivs.append((lo, hi))
        return cls(tuple(ivs))

    @property
    def min(self) -> int:
        return self.intervals[0][0]

    @property
    def max(self) -> int:
        return self.intervals[-1][1]

    @property
    def size(self) -> int:
        return sum(hi - lo + 1 for lo, hi in self.intervals)

    @property
    def contiguous(self) -> bool:
        return len(self.intervals) == 1

    def __contains__(self, value: int) -> bool:
        i = bisect_right(self.intervals, (value, float("inf"))) - 1
        return i >= 0 and self.intervals[i][0] <= value <= self.intervals[i][1]

    def values(self) -> Iterator[int]:
        for lo, hi in self.intervals:
            yield from range(lo, hi + 1)

    def issubset(self, other: "Domain") -> bool:
        for lo, hi in self.intervals:
            i = bisect_right(other.intervals, (lo, float("inf"))) - 1
            if i < 0 or not (other.intervals[i][0] <= lo and hi <= other.intervals[i][1]):
                return False
        return True

    def intersection_values(self, other: "Domain") -> list[int]:
        return [v for v in self.values() if v in other]

    @property
    def hull(self) -> "Domain":
        return Domain.interval(self.min, self.max)

    def __str__(self) -> str:
        return " ".join(
            str(lo) if lo == hi else f"{lo}..{hi}" for lo, hi in self.intervals
        )


class Instance:
    """Immutable collection of named variables over integer domains.

    ``lam`` is the top of the value range ``[1, lam]``.  Instances built by
    :func:`parse_instance` (or :meth:`normalize`) additionally guarantee that
    every value in the range occurs in at least one domain; instances built
    directly from domains may leave gaps, which downstream sweeps tolerate.
    """

    __slots__ = ("variables", "_domains", "_index", "lam", "value_names", "m")

    def __init__(
        self,
        variables: Iterable[str],
        domains: Iterable[Domain],
        lam: int | None = None,
        value_names: tuple[int, ...] | None = None,
    ):
        self.variables: tuple[str, ...] = tuple(variables)
        self._domains: tuple[Domain, ...] = tuple(domains)
        if not self.variables:
            raise ValueError("instance needs at least one variable")
        if len(self.variables) != len(self._domains):
            raise ValueError("one domain per variable required")
        if len(set(self.variables)) != len(self.variables):
            raise ValueError("duplicate variable names")
        self._index = {name: i for i, name in enumerate(self.variables)}
        top = max(d.max for d in self._domains)
        low = min(d.min for d in self._domains)
        if low < 1:
            raise ValueError("values must be >= 1; normalize first")
        if lam is None:
            lam = top
        elif lam < top:
            raise ValueError("lam smaller than largest domain value")
        self.lam = lam
        if value_names is not None and len(value_names) != lam:
            raise ValueError("value_names must map every value in [1, lam]")
        self.value_names = value_names
        self.m = sum(d.size for d in self._domains)

    @classmethod
    def from_domains(
        cls,
        domains: Mapping[str, Domain] | Iterable[tuple[str, Domain]],
        lam: int | None = None,
    ) -> "Instance":
        items = list(domains.items()) if isinstance(domains, Mapping) else list(domains)
        return cls([n for n, _ in items], [d for _, d in items], lam=lam)

    @classmethod
    def normalize(cls, raw: Iterable[tuple[str, Iterable[int]]]) -> "Instance":
        """Rename arbitrary integer values to ``[1, lam]`` preserving order."""
        items = [(name, sorted(set(vals))) for name, vals in raw]
        universe = sorted({v for _, vals in items for v in vals})
        if not universe:
            raise ValueError("no values in any domain")
        rank = {v: i + 1 for i, v in enumerate(universe)}
        domains = [(name, Domain.from_values(rank[v] for v in vals)) for name, vals in items]
        return cls(
            [n for n, _ in domains],
            [d for _, d in domains],
            lam=len(universe),
            value_names=tuple(universe),
        )

    @property
    def n(self) -> int:
        return len(self.variables)

    def domain(self, name: str) -> Domain:
        return self._domains[self._index[name]]

    def domain_at(self, i: int) -> Domain:
        return self._domains[i]

    def items(self) -> Iterator[tuple[str, Domain]]:
        return zip(self.variables, self._domains)

    @property
    def covers_all_values(self) -> bool:
        seen = [False] * (self.lam + 1)
        for d in self._domains:
            for lo, hi in d.intervals:
                for v in range(lo, hi + 1):
                    seen[v] = True
        return all(seen[1:])

    def restricted(self, name: str, domain: Domain) -> "Instance":
        """New instance with one variable's domain replaced (same lam)."""
        i = self._index[name]
        doms = list(self._domains)
        doms[i] = domain
        return Instance(self.variables, doms, lam=self.lam, value_names=self.value_names)

    def with_domains(self, new: Mapping[str, Domain]) -> "Instance":
        doms = [new.get(name, d) for name, d in self.items()]
        return Instance(self.variables, doms, lam=self.lam, value_names=self.value_names)

    def original_value(self, v: int) -> int:
        """Original label of renamed value v (identity when never renamed)."""
        return self.value_names[v - 1] if self.value_names else v

    def original_values(self, domain: Domain) -> list[int]:
        return [self.original_value(v) for v in domain.values()]

    def __repr__(self) -> str:
        return f"Instance(n={self.n}, m={self.m}, lam={self.lam})"


class Assignment:
    """Total mapping from variable name to value.

    :meth:`checked` verifies totality and domain membership; :meth:`relaxed`
    skips the membership check (used by exhaustive experiments) and is
    flagged via :attr:`relaxed`.
    """

    __slots__ = ("values", "relaxed")

    def __init__(self, values: Mapping[str, int], relaxed: bool = False):
        self.values = dict(values)
        self.relaxed = relaxed

    @classmethod
    def checked(cls, instance: Instance, values: Mapping[str, int]) -> "Assignment":
        missing = set(instance.variables) - set(values)
        extra = set(values) - set(instance.variables)
        if missing or extra:
            raise ValueError(f"assignment not total: missing={sorted(missing)} extra={sorted(extra)}")
        for name, v in values.items():
            if v not in instance.domain(name):
                raise ValueError(f"value {v} not in domain of {name!r}")
        return cls(values, relaxed=False)

    def __getitem__(self, name: str) -> int:
        return self.values[name]

    def __len__(self) -> int:
        return len(self.values)

    def items(self) -> Iterator[tuple[str, int]]:
        return iter(self.values.items())

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Assignment) and self.values == other.values

    def __hash__(self) -> int:
        return hash(frozenset(self.values.items()))

    def __repr__(self) -> str:
        inner = ", ".join(f"{k}={v}" for k, v in sorted(self.values.items()))
        return f"Assignment({inner})"


@dataclass(frozen=True)
class CostBounds:
    """Inclusive lower/upper bounds on a cost variable."""

    lo: int
    hi: int

    def __post_init__(self) -> None:
        if self.lo > self.hi:
            raise ValueError(f"empty bounds [{self.lo}, {self.hi}]")


@dataclass(frozen=True)
class CostReport:
    """All cost metrics of one assignment, from a single multiplicity pass."""

    equalities: int
    disequalities: int
    alldiff_var: int
    allequal_var: int
    nvalues: int

    def lines(self) -> list[str]:
        return [
            f"equalities={self.equalities}",
            f"disequalities={self.disequalities}",
            f"alldiff_var={self.alldiff_var}",
            f"allequal_var={self.allequal_var}",
            f"nvalues={self.nvalues}",
        ]


def count_multiplicities(s: Assignment) -> dict[int, int]:
    """Value -> how many variables take it."""
    return dict(Counter(s.values.values()))


def evaluate(instance: Instance, s: Assignment) -> CostReport:
    """All five cost metrics of a total assignment."""
    if set(s.values) != set(instance.variables):
        raise ValueError("assignment is not total over the instance")
    mults = Counter(s.values.values())
    n = instance.n
    equalities = sum(pair_count(c) for c in mults.values())
    nvalues = len(mults)
    max_mult = max(mults.values(), default=0)
    return CostReport(
        equalities=equalities,
        disequalities=pair_count(n) - equalities,
        alldiff_var=n - nvalues,
        allequal_var=n - max_mult,
        nvalues=nvalues,
    )


_MAX_SET_VALUES = 5_000_000


def parse_instance(text: str) -> Instance:
    """Parse the line-oriented instance format and normalize values.

    Format (UTF-8, ``#`` comments and blank lines ignored)::

        var <name> set <v1> <v2> ... <vk>
        var <name> interval <lo> <hi>
    """
    raw: list[tuple[str, list[int]]] = []
    seen: set[str] = set()
    for lineno, line in enumerate(text.splitlines(), start=1):
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        parts = stripped.split()
        if parts[0] != "var":
            raise ParseError(f"expected 'var', got {parts[0]!r}", lineno)
        if len(parts) < 3:
            raise ParseError("incomplete variable declaration", lineno)
        name, kind = parts[1], parts[2]
        if name in seen:
            raise ParseError(f"duplicate variable {name!r}", lineno)
        seen.add(name)
        try:
            args = [int(p) for p in parts[3:]]
        except ValueError as exc:
            raise ParseError(f"non-integer value: {exc}", lineno) from None
        if kind == "set":
            if not args:
                raise ParseError(f"empty domain for {name!r}", lineno)
            if len(set(args)) != len(args):
                raise ParseError(f"duplicate values in domain of {name!r}", lineno)
            raw.append((name, args))
        elif kind == "interval":
            if len(args) != 2:
                raise ParseError("interval needs exactly <lo> <hi>", lineno)
            lo, hi = args
            if lo > hi:
                raise ParseError(f"empty interval [{lo}, {hi}] for {name!r}", lineno)
            if hi - lo + 1 > _MAX_SET_VALUES:
                raise ParseError("interval too wide to normalize", lineno)
            raw.append((name, list(range(lo, hi + 1))))
        else:
            raise ParseError(f"unknown domain kind {kind!r}", lineno)
    if not raw:
        raise ParseError("no variables declared")
    return Instance.normalize(raw)
