import pytest

from softeq import (
    Assignment,
    Domain,
    Instance,
    ParseError,
    count_multiplicities,
    evaluate,
    pair_count,
    parse_instance,
)
from softeq.generate import SplitMix64

from conftest import random_set_instance, set_instance


class TestDomain:
    def test_canonical_form_rejected_when_touching(self):
        with pytest.raises(ValueError):
            Domain(((1, 2), (3, 4)))
        with pytest.raises(ValueError):
            Domain(((1, 5), (4, 8)))
        with pytest.raises(ValueError):
            Domain(((5, 3),))
        with pytest.raises(ValueError):
            Domain(())

    def test_from_values_merges_runs(self):
        d = Domain.from_values([5, 1, 2, 3, 9, 8])
        assert d.intervals == ((1, 3), (5, 5), (8, 9))
        assert d.min == 1 and d.max == 9 and d.size == 6
        assert not d.contiguous
        assert list(d.values()) == [1, 2, 3, 5, 8, 9]

    def test_membership_and_subset(self):
        d = Domain.from_values([1, 2, 5, 6])
        assert 2 in d and 5 in d
        assert 3 not in d and 0 not in d and 7 not in d
        assert Domain.from_values([2, 5]).issubset(d)
        assert not Domain.from_values([2, 4]).issubset(d)
        assert d.hull == Domain.interval(1, 6)


class TestParsing:
    def test_single_interval_renamed(self):
        inst = parse_instance("var X interval 2 7")
        assert inst.n == 1
        assert inst.domain("X") == Domain.interval(1, 6)
        assert inst.lam == 6

    def test_order_preserving_rename(self):
        inst = parse_instance("var A set 10 30\nvar B set 30 50")
        assert inst.value_names == (10, 30, 50)
        assert inst.domain("A") == Domain.from_values([1, 2])
        assert inst.domain("B") == Domain.from_values([2, 3])

    def test_empty_domain_rejected(self):
        with pytest.raises(ParseError, match="empty domain"):
            parse_instance("var A set")

    def test_duplicate_variable_rejected(self):
        with pytest.raises(ParseError, match="duplicate variable"):
            parse_instance("var A set 1\nvar A set 2")

    def test_duplicate_values_rejected(self):
        with pytest.raises(ParseError, match="duplicate values"):
            parse_instance("var A set 3 3")

    def test_syntax_error_carries_line_number(self):
        with pytest.raises(ParseError, match="line 3"):
            parse_instance("# header\nvar A set 1\nfrobnicate")

    def test_comments_and_blanks_ignored(self):
        inst = parse_instance("# c\n\nvar A set 4\n   \nvar B interval 4 5\n")
        assert inst.n == 2
        assert inst.covers_all_values

    def test_normalized_instances_cover_the_range(self):
        rng = SplitMix64(7)
        for _ in range(50):
            inst = random_set_instance(rng, rng.randint(1, 6), rng.randint(1, 8), 4)
            renamed = Instance.normalize((name, list(dom.values())) for name, dom in inst.items())
            assert renamed.covers_all_values
            assert renamed.lam == len({v for _, d in inst.items() for v in d.values()})


def mixed_assignment():
    """Seven variables taking values (a, a, a, a, b, b, c) as 1/2/3."""
    inst = set_instance(*[[1, 2, 3]] * 7)
    values = dict(zip(inst.variables, [1, 1, 1, 1, 2, 2, 3]))
    return inst, Assignment.checked(inst, values)


class TestEvaluate:
    def test_mixed_multiplicity_costs(self):
        inst, s = mixed_assignment()
        report = evaluate(inst, s)
        assert report.alldiff_var == 4
        assert report.equalities == 7
        assert report.disequalities == 14
        assert report.allequal_var == 3
        assert report.nvalues == 3

    def test_all_distinct(self):
        inst = set_instance([1], [2], [3], [4], lam=4)
        s = Assignment.checked(inst, dict(zip(inst.variables, [1, 2, 3, 4])))
        report = evaluate(inst, s)
        assert report.equalities == 0
        assert report.alldiff_var == 0

    def test_multiplicities(self):
        _, s = mixed_assignment()
        assert count_multiplicities(s) == {1: 4, 2: 2, 3: 1}
        assert count_multiplicities(Assignment({})) == {}
        assert count_multiplicities(Assignment({f"X{i}": 9 for i in range(5)})) == {9: 5}

    def test_totality_enforced(self):
        inst = set_instance([1], [2])
        with pytest.raises(ValueError, match="not total"):
            evaluate(inst, Assignment({"X1": 1}))

    def test_checked_constructor_rejects_foreign_values(self):
        inst = set_instance([1, 2], [2, 3])
        with pytest.raises(ValueError, match="not in domain"):
            Assignment.checked(inst, {"X1": 3, "X2": 2})
        relaxed = Assignment({"X1": 3, "X2": 2}, relaxed=True)
        assert relaxed.relaxed
        assert evaluate(inst, relaxed).equalities == 0


class TestCostIdentities:
    def test_identities_on_random_assignments(self):
        rng = SplitMix64(11)
        for _ in range(1000):
            n = rng.randint(1, 9)
            values = [rng.randint(1, 5) for _ in range(n)]
            inst = set_instance(*[[v] for v in values], lam=5)
            s = Assignment.checked(inst, dict(zip(inst.variables, values)))
            report = evaluate(inst, s)
            naive = sum(
                1
                for i in range(n)
                for j in range(i + 1, n)
                if values[i] == values[j]
            )
            mults = count_multiplicities(s)
            assert report.equalities == naive
            assert report.equalities == sum(pair_count(c) for c in mults.values())
            assert report.equalities + report.disequalities == pair_count(n)
            assert report.alldiff_var == n - report.nvalues
            assert report.allequal_var == n - max(mults.values())

    def test_renaming_invariance(self):
        rng = SplitMix64(13)
        for _ in range(200):
            n = rng.randint(1, 7)
            lam = rng.randint(1, 6)
            raw_labels = sorted(rng.sample(500, lam))
            values = [raw_labels[rng.below(lam)] for _ in range(n)]
            raw_inst = set_instance(*[[v] for v in values])
            raw_s = Assignment.checked(raw_inst, dict(zip(raw_inst.variables, values)))
            norm_inst = Instance.normalize(
                (name, list(dom.values())) for name, dom in raw_inst.items()
            )
            rank = {orig: i + 1 for i, orig in enumerate(norm_inst.value_names)}
            norm_s = Assignment.checked(
                norm_inst, {name: rank[v] for name, v in raw_s.items()}
            )
            assert evaluate(raw_inst, raw_s) == evaluate(norm_inst, norm_s)
