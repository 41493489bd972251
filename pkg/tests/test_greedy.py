from softeq import TieBreak, evaluate, greedy_max_equalities, pair_count, report_objective
from softeq.generate import SplitMix64, random_instance
from softeq.oracle import brute_force_optimum

from conftest import random_set_instance, set_instance


def adversarial_instance():
    """Four variables where picking the shared-but-useless value first halves
    the result: X1 {a}, X2 {b}, X3 {a,c}, X4 {b,c} with a,b,c as 1,2,3."""
    return set_instance([1], [2], [1, 3], [2, 3], lam=3)


class TestExamples:
    def test_adversarial_pick_returns_half(self):
        inst = adversarial_instance()
        result = greedy_max_equalities(inst, TieBreak([3]))
        assert result.lower_bound == 1
        assert result.objective == 1
        assert brute_force_optimum(inst, collect_optima=False).best == 2

    def test_smallest_pick_reaches_optimum_here(self):
        result = greedy_max_equalities(adversarial_instance())
        assert result.lower_bound == 2

    def test_single_dominant_value(self):
        inst = set_instance([1], [1, 2], [1, 3], [1, 4], [1, 5], lam=5)
        result = greedy_max_equalities(inst)
        assert result.lower_bound == pair_count(5)
        assert result.objective == pair_count(5)

    def test_identical_domains(self):
        inst = set_instance(*[[4, 5]] * 6, lam=5)
        result = greedy_max_equalities(inst)
        assert result.lower_bound == pair_count(6) == result.objective

    def test_no_round_leaves_leftovers_unassigned(self):
        inst = set_instance([1], [2], [3], lam=3)
        result = greedy_max_equalities(inst)
        assert result.lower_bound == 0
        assert sorted(result.assignment.values.values()) == [1, 2, 3]


class TestGuarantee:
    def test_ratio_on_random_instances(self):
        rng = SplitMix64(103)
        policies = [
            TieBreak.smallest(),
            TieBreak([3, 1, 2]),
            TieBreak(list(range(8, 0, -1))),
        ]
        for _ in range(300):
            inst = random_set_instance(rng, rng.randint(1, 8), rng.randint(1, 8), 4)
            best = brute_force_optimum(inst, collect_optima=False).best
            for policy in policies:
                result = greedy_max_equalities(inst, policy, verify_state=True)
                assert 2 * result.lower_bound >= best
                assert result.lower_bound <= best
                assert result.objective >= result.lower_bound
                assert evaluate(inst, result.assignment).equalities == result.objective

    def test_pair_processing_is_bounded_by_instance_size(self):
        rng = SplitMix64(107)
        for _ in range(200):
            inst = random_set_instance(rng, rng.randint(1, 8), rng.randint(1, 8), 4)
            result = greedy_max_equalities(inst)
            assert result.pairs_processed <= inst.m

    def test_report_objective_counts_accidental_collisions(self):
        inst = set_instance([1], [1], lam=1)
        result = greedy_max_equalities(inst)
        # a single shared value never reaches a two-occurrence round here,
        # but the leftovers still collide
        assert result.lower_bound in (0, 1)
        assert report_objective(result.assignment) == 1


class TestScaling:
    def test_work_grows_linearly(self):
        sizes = [25_000, 50_000, 100_000]
        ops = []
        for m_target in sizes:
            n = m_target // 4
            inst = random_instance(
                "set", seed=1000 + m_target, n=n, lam=max(2, n // 2), max_domain=4
            )
            result = greedy_max_equalities(inst)
            ops.append(result.ops / inst.m)
        for a, b in zip(ops, ops[1:]):
            assert b <= a * 1.25, f"per-item work grew too fast: {ops}"
