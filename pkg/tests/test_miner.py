import pytest

from sharq import (
    ConfigError,
    DataError,
    Dataset,
    Element,
    Rule,
    RuleSet,
    RuleValidationError,
    filter_by_lift,
    load_rules,
    mine_apriori,
    save_rules,
    support,
)


def el(a, v):
    return Element(a, v)


class TestRuleInvariants:
    def test_empty_side_rejected(self):
        with pytest.raises(RuleValidationError):
            Rule(frozenset(), frozenset([el("a", "1")]), 0.5, 1.0)

    def test_overlapping_sides_rejected(self):
        x = el("a", "1")
        with pytest.raises(RuleValidationError):
            Rule(frozenset([x]), frozenset([x, el("b", "2")]), 0.5, 1.0)

    def test_duplicate_attribute_rejected(self):
        with pytest.raises(RuleValidationError):
            Rule(
                frozenset([el("age", "x")]),
                frozenset([el("age", "y")]),
                0.5,
                1.0,
            )

    def test_elements_union(self):
        r = Rule(frozenset([el("a", "1")]), frozenset([el("b", "2")]), 0.5, 1.0)
        assert r.elements == {el("a", "1"), el("b", "2")}
        assert len(r.elements) == len(r.lhs) + len(r.rhs)


class TestRuleSet:
    def test_dedup_on_sides(self):
        r1 = Rule(frozenset([el("a", "1")]), frozenset([el("b", "2")]), 0.5, 1.0)
        r2 = Rule(frozenset([el("a", "1")]), frozenset([el("b", "2")]), 0.9, 2.0)
        rs = RuleSet([r1, r2])
        assert len(rs) == 1
        assert rs[0].support == 0.5

    def test_universe_and_tau(self, demo_rules):
        assert len(demo_rules.universe) == 6
        assert demo_rules.tau == 4

    def test_empty_tau_zero(self):
        assert RuleSet([]).tau == 0


class TestMineApriori:
    def test_low_support_pair_yields_no_rule(self, demo_dataset):
        # gender=Male and hours-per-week=40 co-occur in half the rows
        rs = mine_apriori(demo_dataset, min_support=0.75)
        pair = {el("gender", "Male"), el("hours-per-week", "40")}
        assert all(set(r.elements) != pair for r in rs)

    def test_frequent_pair_mined_with_exact_support(self, demo_dataset):
        rs = mine_apriori(demo_dataset, min_support=0.75)
        pair = {el("hours-per-week", "40"), el("income", "<=50K")}
        matching = [r for r in rs if set(r.elements) == pair]
        assert len(matching) == 2  # both orientations
        assert all(r.support == 0.75 for r in matching)

    def test_impossible_support_yields_empty(self):
        d = Dataset(("a", "b"), (("1", "1"), ("2", "2")))
        assert len(mine_apriori(d, min_support=1.0)) == 0

    def test_two_identical_rows(self):
        d = Dataset(("a", "b"), (("v", "w"), ("v", "w")))
        rs = mine_apriori(d, min_support=0.5)
        assert len(rs) == 2
        for r in rs:
            assert r.support == 1.0
            assert r.lift == 1.0

    def test_empty_dataset_rejected(self):
        with pytest.raises(DataError):
            mine_apriori(Dataset(("a",), ()), min_support=0.5)

    def test_bad_support_rejected(self, demo_dataset):
        with pytest.raises(ConfigError):
            mine_apriori(demo_dataset, min_support=0.0)

    def test_stored_support_matches_recomputation(self, demo_dataset):
        rs = mine_apriori(demo_dataset, min_support=0.25)
        assert len(rs) > 0
        for r in rs:
            assert support(r, demo_dataset) == r.support

    def test_monotone_in_min_support(self, demo_dataset):
        keys = lambda rs: {(r.lhs, r.rhs) for r in rs}
        loose = keys(mine_apriori(demo_dataset, min_support=0.25))
        tight = keys(mine_apriori(demo_dataset, min_support=0.5))
        assert tight <= loose

    def test_max_len_bounds_rule_size(self, demo_dataset):
        rs = mine_apriori(demo_dataset, min_support=0.25, max_len=2)
        assert all(len(r.elements) <= 2 for r in rs)


class TestFilterByLift:
    def rules(self, *lifts):
        return RuleSet(
            Rule(frozenset([el("a", str(i))]), frozenset([el("b", str(i))]), 0.5, lift)
            for i, lift in enumerate(lifts)
        )

    def test_positive_association_kept(self):
        assert len(filter_by_lift(self.rules(1.2), 1.05)) == 1

    def test_negative_association_kept_via_reciprocal(self):
        assert len(filter_by_lift(self.rules(0.9), 1.05)) == 1

    def test_independent_rule_dropped(self):
        assert len(filter_by_lift(self.rules(1.0), 1.05)) == 0

    def test_zero_lift_kept(self):
        assert len(filter_by_lift(self.rules(0.0), 1.05)) == 1

    def test_antitone_in_threshold(self):
        rs = self.rules(1.04, 1.1, 0.5, 1.0, 2.0)
        keys = lambda rs: {(r.lhs, r.rhs) for r in rs}
        assert keys(filter_by_lift(rs, 1.2)) <= keys(filter_by_lift(rs, 1.05))

    def test_threshold_must_exceed_one(self):
        with pytest.raises(ConfigError):
            filter_by_lift(self.rules(1.2), 1.0)


class TestRulesIO:
    def test_round_trip_identity(self, demo_rules, tmp_path):
        path = tmp_path / "rules.jsonl"
        save_rules(demo_rules, path)
        again = load_rules(path)
        assert again == demo_rules

    def test_round_trip_is_byte_stable(self, demo_rules, tmp_path):
        p1, p2 = tmp_path / "a.jsonl", tmp_path / "b.jsonl"
        save_rules(demo_rules, p1)
        save_rules(load_rules(p1), p2)
        assert p1.read_bytes() == p2.read_bytes()

    def test_empty_lhs_names_record(self, tmp_path):
        path = tmp_path / "bad.jsonl"
        path.write_text(
            '{"lhs": [], "rhs": [{"attr": "a", "value": "1"}], "support": 0.1, "lift": 1.0}\n'
        )
        with pytest.raises(RuleValidationError, match="record 1"):
            load_rules(path)

    def test_duplicate_attribute_names_record(self, tmp_path):
        path = tmp_path / "bad.jsonl"
        path.write_text(
            '{"lhs": [{"attr": "age", "value": "x"}], '
            '"rhs": [{"attr": "age", "value": "y"}], "support": 0.1, "lift": 1.0}\n'
            )
        with pytest.raises(RuleValidationError, match="record 1"):
            load_rules(path)

    def test_score_field_optional_and_kept(self, demo_rules):
        assert [r.score for r in demo_rules] == [1.05, 1.02, 1.05, 0.7]
