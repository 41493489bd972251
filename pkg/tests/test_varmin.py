import pytest

from softeq import (
    ContiguityError,
    CostBounds,
    Domain,
    Mode,
    max_shared_occurrence,
    propagate_var_min,
)
from softeq.generate import SplitMix64
from softeq.oracle import CostKind, brute_force_supports

from conftest import interval_instance, random_interval_instance, random_set_instance, set_instance


class TestMaxSharedOccurrence:
    def test_identical_singletons(self):
        inst = set_instance(*[[7]] * 5)
        assert max_shared_occurrence(inst) == 5

    def test_disjoint_domains(self):
        inst = set_instance([1], [2], [3])
        assert max_shared_occurrence(inst) == 1

    def test_matches_direct_count(self):
        rng = SplitMix64(31)
        for _ in range(200):
            inst = random_set_instance(rng, rng.randint(1, 6), rng.randint(1, 6), 4)
            direct = max(
                sum(1 for _, dom in inst.items() if v in dom)
                for v in range(1, inst.lam + 1)
            )
            assert max_shared_occurrence(inst, Mode.AC) == direct
        for _ in range(200):
            inst = random_interval_instance(rng, rng.randint(1, 6), rng.randint(1, 6))
            direct = max(
                sum(1 for _, dom in inst.items() if v in dom)
                for v in range(1, inst.lam + 1)
            )
            assert max_shared_occurrence(inst, Mode.RC) == direct


class TestPropagateExamples:
    def test_requirement_above_reach_fails(self):
        inst = set_instance([1], [2])
        outcome = propagate_var_min(inst, CostBounds(2, 2))
        assert outcome.failed

    def test_slack_means_no_pruning(self):
        inst = set_instance([1, 2], [1, 2], [1, 2])
        outcome = propagate_var_min(inst, CostBounds(2, 3))
        assert not outcome.failed
        assert outcome.pruned == {}
        assert outcome.cost == CostBounds(2, 3)

    def test_pinned_requirement_prunes(self):
        inst = set_instance([1], [2], [1, 2, 3], lam=3)
        outcome = propagate_var_min(inst, CostBounds(2, 3))
        assert outcome.pruned == {"X3": Domain.from_values([1, 2])}
        assert outcome.cost == CostBounds(2, 2)

    def test_interval_regression_prunes_to_union(self):
        # occurrence profile peaks at 4 on [2,4] and at the point 7
        inst = interval_instance((1, 4), (2, 5), (2, 4), (2, 9), (6, 7), (6, 7), (7, 8))
        assert max_shared_occurrence(inst, Mode.RC) == 4
        outcome = propagate_var_min(inst, CostBounds(4, 7), Mode.RC)
        assert not outcome.failed
        assert outcome.pruned == {"X4": Domain(((2, 4), (7, 7)))}
        assert outcome.cost == CostBounds(4, 4)
        bc = propagate_var_min(inst, CostBounds(4, 7), Mode.BC)
        assert bc.pruned == {"X4": Domain.interval(2, 7)}

    def test_rc_requires_contiguous_domains(self):
        inst = set_instance([1, 3], lam=3)
        with pytest.raises(ContiguityError):
            propagate_var_min(inst, CostBounds(1, 1), Mode.RC)


def oracle_check(inst, lo, mode):
    """Compare one propagator call against the exhaustive support map."""
    n = inst.n
    bounds = CostBounds(0, n - lo)  # shared count >= lo means cost <= n - lo
    kind = "domain" if mode is Mode.AC else "range"
    supports = brute_force_supports(inst, CostKind.EQUAL_VAR_MIN, bounds, kind)
    outcome = propagate_var_min(inst, CostBounds(lo, n), mode)
    if outcome.failed:
        assert not any(supports.values())
        return
    for name, dom in inst.items():
        kept = outcome.pruned.get(name, dom)
        supported = [v for v in dom.values() if supports[(name, v)]]
        assert supported, "non-failure implies someone is supported"
        if mode is Mode.BC:
            assert kept.min == min(supported) and kept.max == max(supported)
            assert kept == Domain.interval(min(supported), max(supported)) or kept == dom
        else:
            assert list(kept.values()) == supported


class TestOracleEquivalence:
    def test_ac_against_domain_supports(self):
        rng = SplitMix64(41)
        for _ in range(150):
            inst = random_set_instance(rng, rng.randint(1, 5), rng.randint(1, 5), 4)
            for lo in range(0, inst.n + 1):
                oracle_check(inst, lo, Mode.AC)

    def test_rc_bc_against_range_supports(self):
        rng = SplitMix64(43)
        for _ in range(150):
            inst = random_interval_instance(rng, rng.randint(1, 5), rng.randint(1, 5))
            for lo in range(0, inst.n + 1):
                oracle_check(inst, lo, Mode.RC)
                oracle_check(inst, lo, Mode.BC)


class TestPropagatorProperties:
    def test_below_peak_never_prunes(self):
        rng = SplitMix64(47)
        for _ in range(200):
            inst = random_set_instance(rng, rng.randint(1, 6), rng.randint(1, 6), 4)
            kstar = max_shared_occurrence(inst)
            for lo in range(0, kstar):
                outcome = propagate_var_min(inst, CostBounds(lo, inst.n))
                assert not outcome.failed and outcome.pruned == {}

    def test_second_run_is_a_fixpoint(self):
        rng = SplitMix64(53)
        checked = 0
        for _ in range(300):
            inst = random_set_instance(rng, rng.randint(1, 6), rng.randint(1, 6), 4)
            kstar = max_shared_occurrence(inst)
            outcome = propagate_var_min(inst, CostBounds(kstar, inst.n), Mode.AC)
            assert not outcome.failed
            if not outcome.pruned:
                continue
            pruned_inst = inst.with_domains(outcome.pruned)
            again = propagate_var_min(pruned_inst, outcome.cost, Mode.AC)
            assert not again.failed
            assert again.pruned == {}
            assert again.cost == outcome.cost
            checked += 1
        assert checked > 10

    def test_bc_result_stays_contiguous_and_fixpoint(self):
        rng = SplitMix64(59)
        for _ in range(200):
            inst = random_interval_instance(rng, rng.randint(1, 6), rng.randint(1, 6))
            kstar = max_shared_occurrence(inst, Mode.RC)
            outcome = propagate_var_min(inst, CostBounds(kstar, inst.n), Mode.BC)
            assert not outcome.failed
            for dom in outcome.pruned.values():
                assert dom.contiguous
            pruned_inst = inst.with_domains(outcome.pruned)
            again = propagate_var_min(pruned_inst, outcome.cost, Mode.BC)
            assert again.pruned == {} and again.cost == outcome.cost
