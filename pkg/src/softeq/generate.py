"""Deterministic instance generators.

Randomness comes from a self-contained SplitMix64 stream (Steele, Lea &
Flood's 64-bit mixer: state advances by the golden-gamma constant
0x9E3779B97F4A7C15 and is finalized with two xor-multiply rounds), so the
same seed reproduces identical instance files in any implementation.
Bounded draws use the multiply-shift reduction ``(word * n) >> 64``.
"""

from __future__ import annotations

from .model import BudgetError, Instance, parse_instance
from .oracle import ThreeDMInstance, enumeration_size, reduce_3dm

_MASK = (1 << 64) - 1


class SplitMix64:
    """Tiny deterministic PRNG; one 64-bit output per step."""

    __slots__ = ("state",)

    def __init__(self, seed: int):
        self.state = seed & _MASK

    def next_u64(self) -> int:
        self.state = (self.state + 0x9E3779B97F4A7C15) & _MASK
        z = self.state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK
        return z ^ (z >> 31)

    def below(self, n: int) -> int:
        """Uniform-ish draw in [0, n)."""
        if n <= 0:
            raise ValueError("below() needs a positive bound")
        return (self.next_u64() * n) >> 64

    def randint(self, lo: int, hi: int) -> int:
        """Inclusive draw in [lo, hi]."""
        return lo + self.below(hi - lo + 1)

    def sample(self, universe: int, count: int) -> list[int]:
        """count distinct draws from [1, universe], ascending."""
        chosen: set[int] = set()
        while len(chosen) < count:
            chosen.add(self.randint(1, universe))
        return sorted(chosen)


def gen_set_instance(n: int, lam: int, max_domain: int, seed: int) -> str:
    """Explicit-set domains, sizes in [1, max_domain]."""
    if n < 1 or lam < 1 or max_domain < 1:
        raise ValueError("n, lam and max domain size must be positive")
    rng = SplitMix64(seed)
    lines = [f"# set instance n={n} lam={lam} dmax={max_domain} seed={seed}"]
    for i in range(1, n + 1):
        size = rng.randint(1, min(max_domain, lam))
        values = rng.sample(lam, size)
        lines.append(f"var X{i} set " + " ".join(map(str, values)))
    return "\n".join(lines) + "\n"


def gen_interval_instance(n: int, lam: int, seed: int) -> str:
    """Single-interval domains within [1, lam]."""
    if n < 1 or lam < 1:
        raise ValueError("n and lam must be positive")
    rng = SplitMix64(seed)
    lines = [f"# interval instance n={n} lam={lam} seed={seed}"]
    for i in range(1, n + 1):
        lo = rng.randint(1, lam)
        hi = rng.randint(lo, lam)
        lines.append(f"var X{i} interval {lo} {hi}")
    return "\n".join(lines) + "\n"


def gen_two_occ_instance(n: int, lam: int, seed: int) -> str:
    """Instance where no value lands in more than two domains."""
    if n < 1 or lam < 1:
        raise ValueError("n and lam must be positive")
    rng = SplitMix64(seed)
    domains: list[set[int]] = [set() for _ in range(n)]
    for v in range(1, lam + 1):
        holders = rng.below(3)  # 0, 1 or 2 domains get this value
        picked: set[int] = set()
        while len(picked) < holders:
            picked.add(rng.below(n))
        for i in picked:
            domains[i].add(v)
    extra = lam
    for i in range(n):
        if not domains[i]:
            extra += 1
            domains[i].add(extra)
    lines = [f"# two-occurrence instance n={n} lam={lam} seed={seed}"]
    for i, values in enumerate(domains, start=1):
        lines.append(f"var X{i} set " + " ".join(map(str, sorted(values))))
    return "\n".join(lines) + "\n"


def gen_one_heavy_instance(n: int, lam: int, heavy_count: int, seed: int) -> str:
    """Instance whose domains hold at most one value occurring three+ times.

    Heavy values get disjoint holder groups of size >= 3; filler values are
    sprinkled with at most two occurrences each.
    """
    if n < 3 * max(heavy_count, 1):
        raise ValueError("need at least 3 variables per heavy value")
    rng = SplitMix64(seed)
    domains: list[set[int]] = [set() for _ in range(n)]
    free = list(range(n))
    value = 0
    for _ in range(heavy_count):
        value += 1
        group_size = rng.randint(3, min(5, len(free)))
        for _ in range(group_size):
            slot = rng.below(len(free))
            domains[free.pop(slot)].add(value)
    for _ in range(lam):
        value += 1
        holders = 1 + rng.below(2)
        picked: set[int] = set()
        while len(picked) < holders:
            picked.add(rng.below(n))
        for i in picked:
            domains[i].add(value)
    for i in range(n):
        if not domains[i]:
            value += 1
            domains[i].add(value)
    lines = [f"# one-heavy instance n={n} lam={lam} heavy={heavy_count} seed={seed}"]
    for i, values in enumerate(domains, start=1):
        lines.append(f"var X{i} set " + " ".join(map(str, sorted(values))))
    return "\n".join(lines) + "\n"


def gen_3dm_instance(qx: int, qy: int, qz: int, triples: int, seed: int) -> str:
    """Random triple-matching input over element sets of the given sizes."""
    if min(qx, qy, qz) < 1:
        raise ValueError("element sets must be non-empty")
    rng = SplitMix64(seed)
    xs = [f"x{i}" for i in range(1, qx + 1)]
    ys = [f"y{i}" for i in range(1, qy + 1)]
    zs = [f"z{i}" for i in range(1, qz + 1)]
    seen: set[tuple[str, str, str]] = set()
    chosen: list[tuple[str, str, str]] = []
    attempts = 0
    while len(chosen) < triples and attempts < 20 * triples + 20:
        attempts += 1
        t = (xs[rng.below(qx)], ys[rng.below(qy)], zs[rng.below(qz)])
        if t not in seen:
            seen.add(t)
            chosen.append(t)
    lines = [f"# triple-matching instance sizes=({qx},{qy},{qz}) seed={seed}"]
    lines += [f"elem x {e}" for e in xs]
    lines += [f"elem y {e}" for e in ys]
    lines += [f"elem z {e}" for e in zs]
    lines += [f"triple {a} {b} {c}" for a, b, c in chosen]
    return "\n".join(lines) + "\n"


def gen_multi_instance(copies: int, n: int, lam: int, cost_max: int, seed: int) -> str:
    """Grid of interval domains plus a bound on the summed distance."""
    if copies < 2 or n < 1 or lam < 1:
        raise ValueError("need copies >= 2, n >= 1, lam >= 1")
    rng = SplitMix64(seed)
    lines = [f"# multi instance copies={copies} n={n} lam={lam} seed={seed}"]
    lines.append(f"copies {copies}")
    for j in range(1, copies + 1):
        for i in range(1, n + 1):
            lo = rng.randint(1, lam)
            hi = rng.randint(lo, lam)
            lines.append(f"var {j}.C{i} interval {lo} {hi}")
    lines.append(f"cost max {cost_max}")
    return "\n".join(lines) + "\n"


def random_instance(
    kind: str,
    seed: int,
    *,
    n: int,
    lam: int,
    max_domain: int = 4,
    heavy_count: int = 1,
    max_enumeration: int | None = None,
) -> Instance:
    """Parsed random instance, resampling until the exhaustive-search size
    fits under ``max_enumeration`` (sub-seeds advance deterministically)."""
    for attempt in range(1000):
        sub_seed = seed * 1000 + attempt
        if kind == "set":
            text = gen_set_instance(n, lam, max_domain, sub_seed)
        elif kind == "interval":
            text = gen_interval_instance(n, lam, sub_seed)
        elif kind == "two-occ":
            text = gen_two_occ_instance(n, lam, sub_seed)
        elif kind == "one-heavy":
            text = gen_one_heavy_instance(n, lam, heavy_count, sub_seed)
        else:
            raise ValueError(f"unknown kind {kind!r}")
        instance = parse_instance(text)
        if max_enumeration is None or enumeration_size(instance) <= max_enumeration:
            return instance
    raise BudgetError("could not sample an instance under the enumeration cap")


def random_3dm(
    seed: int,
    *,
    max_group: int = 3,
    max_triples: int = 6,
    max_enumeration: int | None = None,
) -> ThreeDMInstance:
    """Random triple-matching instance; group sizes drawn independently in
    [1, max_group], resampled while the reduced instance is too big to
    enumerate exhaustively."""
    from .oracle import parse_3dm

    for attempt in range(1000):
        rng = SplitMix64(seed * 1000 + attempt)
        qx = rng.randint(1, max_group)
        qy = rng.randint(1, max_group)
        qz = rng.randint(1, max_group)
        triples = rng.below(max_triples + 1)
        tdm = parse_3dm(gen_3dm_instance(qx, qy, qz, triples, seed * 1000 + attempt))
        if max_enumeration is None:
            return tdm
        if enumeration_size(reduce_3dm(tdm)) <= max_enumeration:
            return tdm
    raise BudgetError("could not sample a gadget under the enumeration cap")
