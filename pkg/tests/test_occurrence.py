import pytest

from softeq import (
    ContiguityError,
    Domain,
    Instance,
    build_delta,
    crest_partition,
    inverse_occurrence,
    reduce_by_crests,
    value_occurrences,
)
from softeq.generate import SplitMix64
from softeq.oracle import brute_force_optimum

from conftest import interval_instance, random_interval_instance, set_instance


class TestDeltaList:
    def test_single_interval_closed_events(self):
        delta = build_delta(interval_instance((1, 3)))
        assert list(delta) == [(2, 1), (8, -1)]

    def test_two_overlapping_intervals(self):
        delta = build_delta(interval_instance((1, 2), (2, 3)))
        assert list(delta) == [(2, 1), (4, 1), (6, -1), (8, -1)]

    def test_half_open_end_key(self):
        delta = build_delta(interval_instance((1, 3)), half_open=True)
        assert list(delta) == [(2, 1), (7, -1)]

    def test_events_balance_and_stay_sorted(self):
        rng = SplitMix64(3)
        for _ in range(100):
            inst = random_interval_instance(rng, rng.randint(1, 8), rng.randint(1, 10))
            for half_open in (False, True):
                delta = build_delta(inst, half_open=half_open)
                keys = [k for k, _ in delta]
                assert keys == sorted(keys)
                assert len(set(keys)) == len(keys)
                assert delta.total() == 0
                assert len(delta) <= 2 * inst.n
                assert all(d != 0 for _, d in delta)

    def test_union_domain_rejected_by_name(self):
        inst = set_instance([1, 3], lam=3)
        with pytest.raises(ContiguityError, match="X1"):
            build_delta(inst)


class TestInverseOccurrence:
    def test_single_interval(self):
        inv = inverse_occurrence(interval_instance((1, 3)))
        assert inv.bucket(1) == ((1, 3),)
        assert inv.max_occupied == 1

    def test_two_intervals_counted(self):
        inv = inverse_occurrence(interval_instance((1, 2), (2, 3)))
        assert inv.bucket(1) == ((1, 1), (3, 3))
        assert inv.bucket(2) == ((2, 2),)

    def test_identical_singletons(self):
        inv = inverse_occurrence(interval_instance((1, 1), (1, 1), (1, 1), (1, 1)))
        assert inv.bucket(4) == ((1, 1),)
        assert inv.max_occupied == 4

    def test_backends_agree_and_match_direct_count(self):
        rng = SplitMix64(5)
        for _ in range(500):
            inst = random_interval_instance(rng, rng.randint(1, 8), rng.randint(1, 12))
            by_list = inverse_occurrence(inst, backend="list")
            by_array = inverse_occurrence(inst, backend="array")
            assert by_list == by_array
            occ = value_occurrences(inst)
            for v in range(1, inst.lam + 1):
                holder = [c for c in by_list.buckets if any(lo <= v <= hi for lo, hi in by_list.bucket(c))]
                assert holder == [occ[v]] or (occ[v] == 0 and holder in ([], [0]))

    def test_bucket_mass_equals_domain_mass(self):
        rng = SplitMix64(9)
        for _ in range(200):
            inst = random_interval_instance(rng, rng.randint(1, 8), rng.randint(1, 12))
            inv = inverse_occurrence(inst)
            mass = sum(
                count * (hi - lo + 1)
                for count, ivs in inv.buckets.items()
                for lo, hi in ivs
            )
            assert mass == inst.m
            covered = sorted(
                (lo, hi) for ivs in inv.buckets.values() for lo, hi in ivs
            )
            flat = [v for lo, hi in covered for v in range(lo, hi + 1)]
            assert flat == list(range(1, inst.lam + 1))


class TestCrestPartition:
    def test_nested_intervals_single_crest(self):
        part = crest_partition(interval_instance((1, 5), (2, 4), (3, 3)))
        assert part.crests == ((1, 5),)

    def test_gap_splits_at_next_rise(self):
        part = crest_partition(interval_instance((1, 2), (4, 5), lam=5))
        assert part.crests == ((1, 3), (4, 5))

    def test_overlap_stays_single(self):
        part = crest_partition(interval_instance((1, 2), (2, 3)))
        assert part.crests == ((1, 3),)

    def test_partition_shape(self):
        rng = SplitMix64(17)
        for _ in range(300):
            inst = random_interval_instance(rng, rng.randint(1, 8), rng.randint(1, 12))
            part = crest_partition(inst)
            assert len(part) <= inst.n
            assert part.crests[0][0] == 1
            assert part.crests[-1][1] == inst.lam
            for (_, hi), (lo, _) in zip(part.crests, part.crests[1:]):
                assert lo == hi + 1

    def test_each_crest_rises_then_falls(self):
        rng = SplitMix64(19)
        for _ in range(200):
            inst = random_interval_instance(rng, rng.randint(1, 7), rng.randint(1, 10))
            part = crest_partition(inst)
            bounds = [(d.min, d.max) for _, d in inst.items()]

            def occ_at(key2: int) -> int:
                return sum(1 for lo, hi in bounds if 2 * lo <= key2 <= 2 * hi)

            for lo, hi in part.crests:
                samples = [occ_at(k) for k in range(2 * lo, 2 * hi + 1)]
                peak = samples.index(max(samples))
                assert all(a <= b for a, b in zip(samples[:peak], samples[1 : peak + 1]))
                assert all(a >= b for a, b in zip(samples[peak:], samples[peak + 1 :]))


class TestReduceByCrests:
    def test_single_crest_collapses_everything(self):
        inst = interval_instance((1, 5), (2, 4), (3, 3))
        reduced = reduce_by_crests(inst, crest_partition(inst))
        assert reduced.lam == 1
        assert all(dom == Domain.interval(1, 1) for _, dom in reduced.items())

    def test_overlap_maps_to_crest_ranks(self):
        inst = interval_instance((1, 2), (4, 5), lam=5)
        reduced = reduce_by_crests(inst, crest_partition(inst))
        assert reduced.domain("X1") == Domain.interval(1, 1)
        assert reduced.domain("X2") == Domain.interval(2, 2)

    def test_optimum_preserved(self):
        rng = SplitMix64(23)
        for _ in range(200):
            inst = random_interval_instance(rng, rng.randint(2, 6), rng.randint(2, 12))
            reduced = reduce_by_crests(inst, crest_partition(inst))
            assert reduced.lam <= min(inst.lam, inst.n)
            assert (
                brute_force_optimum(inst, collect_optima=False).best
                == brute_force_optimum(reduced, collect_optima=False).best
            )
