import itertools

import pytest
from hypothesis import given, strategies as st

from sentipar.errors import AlignmentError, EmptyInputError, EmptyMiningSetError
from sentipar.rules import (
    ONE,
    ONE_OR_MORE,
    ComplexityClass,
    ConfusionMetrics,
    PhraseSeqRule,
    classify,
    confidence,
    evaluate,
    format_percent,
    is_complex,
    is_compound,
    matches,
    mine_rules,
    read_rules,
    write_rules,
)
from sentipar.trees import parse_tree


def rule(*items) -> PhraseSeqRule:
    """Build a rule from 'NP*'-style strings."""
    return PhraseSeqRule(
        tuple(
            (item.rstrip("*"), ONE_OR_MORE if item.endswith("*") else ONE)
            for item in items
        )
    )


class TestMineRules:
    def test_run_collapsing_merges(self):
        rs = mine_rules([("NP", "VP"), ("NP", "VP"), ("NP", "NP", "VP")])
        assert len(rs) == 1
        mined = rs.rules[0]
        assert mined.surface() == "NP* VP"
        assert mined.match_count == 3
        assert mined.confidence == pytest.approx(1.0)

    def test_single_sequence(self):
        rs = mine_rules([("NP", "VP", "PP")])
        assert rs.rules[0].surface() == "NP VP PP"
        assert rs.rules[0].confidence == pytest.approx(1.0)

    def test_empty_mining_set(self):
        with pytest.raises(EmptyMiningSetError):
            mine_rules([])

    def test_distinct_skeletons_stay_apart(self):
        rs = mine_rules([("NP", "VP"), ("NP", "VP", "NP")])
        assert sorted(r.surface() for r in rs) == ["NP VP", "NP VP NP"]
        assert all(r.match_count == 1 for r in rs)

    @given(
        st.lists(
            st.lists(st.sampled_from(["NP", "VP", "PP"]), min_size=1, max_size=6).map(tuple),
            min_size=1,
            max_size=40,
        )
    )
    def test_counts_partition_the_mining_set(self, seqs):
        rs = mine_rules(seqs)
        # every mined sequence matches exactly one mined rule
        for seq in seqs:
            assert sum(1 for r in rs if matches(r, seq)) == 1
        assert sum(r.match_count for r in rs) == rs.total == len(seqs)
        assert sum(r.confidence for r in rs) == pytest.approx(1.0, abs=1e-9)


class TestConfidence:
    def test_zero_matches(self):
        assert confidence(0, 3046) == 0.0

    def test_all_match(self):
        assert confidence(3046, 3046) == 1.0

    def test_percent_display(self):
        assert format_percent(confidence(370, 3046)) == "12.15"

    def test_zero_total(self):
        with pytest.raises(ZeroDivisionError):
            confidence(0, 0)

    def test_out_of_range(self):
        with pytest.raises(ValueError):
            confidence(5, 4)


class TestMatches:
    def test_star_star(self):
        assert matches(rule("NP*", "VP", "NP*"), ("NP", "NP", "VP", "NP"))

    def test_whole_sequence_only(self):
        assert not matches(rule("NP", "VP"), ("NP", "VP", "PP"))

    def test_star_requires_at_least_one(self):
        assert not matches(rule("NP*", "VP"), ("VP",))

    def test_against_enumeration_oracle(self):
        # Brute force: expand every pattern of length <= 4 into the sequences
        # it generates (length <= 6) and compare membership.
        labels = ("NP", "VP", "PP")
        flags = (ONE, ONE_OR_MORE)
        seqs = [
            seq
            for n in range(0, 7)
            for seq in itertools.product(labels, repeat=n)
        ]
        for plen in range(1, 5):
            for pat_labels in itertools.product(labels, repeat=plen):
                for pat_flags in itertools.product(flags, repeat=plen):
                    r = PhraseSeqRule(tuple(zip(pat_labels, pat_flags)))
                    generated = set()
                    reps = [
                        range(1, 7) if f == ONE_OR_MORE else range(1, 2)
                        for f in pat_flags
                    ]
                    for counts in itertools.product(*reps):
                        if sum(counts) <= 6:
                            expansion = tuple(
                                label
                                for label, k in zip(pat_labels, counts)
                                for _ in range(k)
                            )
                            generated.add(expansion)
                    for seq in seqs:
                        assert matches(r, seq) == (seq in generated), (r, seq)


class TestComplexCompound:
    def test_mid_sentence_sbar_is_complex(self):
        tree = parse_tree(
            "(S (NP (PRP She)) (VP (VBD said) (SBAR (IN that) "
            "(S (NP (PRP he)) (VP (VBD left))))) (. .))"
        )
        assert is_complex(tree)

    def test_no_sbar_not_complex(self):
        assert not is_complex(parse_tree("(S (NP (NN cat)) (VP (VBD sat)))"))

    def test_initial_sbar_without_comma_not_complex(self):
        tree = parse_tree(
            "(S (SBAR (IN Because) (S (NP (PRP it)) (VP (VBD rained)))) "
            "(NP (PRP we)) (VP (VBD stayed)))"
        )
        assert not is_complex(tree)

    def test_initial_sbar_with_later_comma_is_complex(self):
        tree = parse_tree(
            "(S (SBAR (IN Because) (S (NP (PRP it)) (VP (VBD rained)))) "
            "(, ,) (NP (PRP we)) (VP (VBD stayed)))"
        )
        assert is_complex(tree)

    def test_comma_inside_initial_sbar_does_not_count(self):
        tree = parse_tree(
            "(S (SBAR (IN Because) (S (NP (PRP it)) (, ,) (VP (VBD rained)))) "
            "(NP (PRP we)) (VP (VBD stayed)))"
        )
        assert not is_complex(tree)

    def test_clause_coordination_is_compound(self):
        tree = parse_tree(
            "(S (S (NP (NN cat)) (VP (VBD sat))) (CC and) "
            "(S (NP (NN dog)) (VP (VBD ran))))"
        )
        assert is_compound(tree)

    def test_np_coordination_is_not_compound(self):
        tree = parse_tree(
            "(S (NP (NN cat) (CC and) (NN dog)) (VP (VBD ran)))"
        )
        assert not is_compound(tree)

    def test_no_cc_not_compound(self):
        assert not is_compound(parse_tree("(S (NP (NN cat)) (VP (VBD sat)))"))


class TestClassify:
    @pytest.fixture
    def ruleset(self):
        return mine_rules([("NP", "VP", "PP"), ("NP", "VP")])

    def test_simple(self, ruleset):
        tree = parse_tree(
            "(S (NP (NN cat)) (VP (VBD sat)) (PP (IN on) (NP (NN mat))))"
        )
        assert classify(tree, ruleset) == ComplexityClass.SIMPLE

    def test_compound(self, ruleset):
        tree = parse_tree(
            "(S (S (NP (NN cat)) (VP (VBD sat))) (CC and) "
            "(S (NP (NN dog)) (VP (VBD ran))))"
        )
        assert classify(tree, ruleset) == ComplexityClass.COMPOUND

    def test_untagged_when_no_rule_matches(self, ruleset):
        tree = parse_tree("(S (INTJ (UH wow)) (. !))")
        assert classify(tree, ruleset) == ComplexityClass.UNTAGGED

    def test_complex_wins_over_compound(self, ruleset):
        tree = parse_tree(
            "(S (S (NP (PRP He)) (VP (VBD said) (SBAR (IN that) "
            "(S (NP (PRP it)) (VP (VBD works)))))) (CC and) "
            "(S (NP (PRP she)) (VP (VBD agreed))))"
        )
        assert classify(tree, ruleset) == ComplexityClass.COMPLEX

    def test_rule_match_with_sbar_is_not_simple(self, ruleset):
        # Sentence-initial SBAR without a comma: neither complex nor
        # compound, but the dependent clause still blocks Simple.
        tree = parse_tree(
            "(S (SBAR (IN Because) (S (NP (PRP it)) (VP (VBD rained)))) "
            "(NP (PRP we)) (VP (VBD stayed)))"
        )
        assert classify(tree, ruleset) == ComplexityClass.UNTAGGED

    def test_every_tree_gets_exactly_one_class(self, ruleset):
        trees = [
            "(S (NP (NN cat)) (VP (VBD sat)))",
            "(S (INTJ (UH wow)))",
            "(S (S (NP (NN a)) (VP (VBD b))) (CC and) (S (NP (NN c)) (VP (VBD d))))",
            "(S (NP (PRP She)) (VP (VBD said) (SBAR (IN that) (S (VP (VBD left))))))",
        ]
        for text in trees:
            assert classify(parse_tree(text), ruleset) in ComplexityClass


class TestEvaluate:
    def test_printed_confusion_matrix(self):
        m = ConfusionMetrics.from_matrix(((1275, 90), (220, 1291)))
        assert m.accuracy * 100 == pytest.approx(89.22, abs=0.01)
        assert m.kappa == pytest.approx(0.785, abs=0.0005)
        assert m.precision * 100 == pytest.approx(93.41, abs=0.2)
        assert m.recall * 100 == pytest.approx(85.28, abs=0.2)
        assert m.f1 * 100 == pytest.approx(89.16, abs=0.2)

    def test_perfect_agreement(self):
        m = evaluate(["Simple", "Other", "Simple"], ["Simple", "Other", "Simple"])
        assert m.accuracy == 1.0
        assert m.kappa == 1.0

    def test_constant_predictions_on_balanced_gold(self):
        m = evaluate(["Other"] * 4, ["Simple", "Other", "Simple", "Other"])
        assert m.accuracy == 0.5
        assert m.kappa == 0.0

    def test_complexity_classes_binarized(self):
        m = evaluate(
            [ComplexityClass.SIMPLE, ComplexityClass.COMPLEX, ComplexityClass.COMPOUND],
            ["Simple", "Other", "Simple"],
        )
        assert m.matrix == ((1, 0), (1, 1))

    def test_length_mismatch(self):
        with pytest.raises(AlignmentError):
            evaluate(["Simple"], ["Simple", "Other"])

    def test_empty(self):
        with pytest.raises(EmptyInputError):
            evaluate([], [])

    @given(
        st.tuples(
            st.integers(0, 500), st.integers(0, 500),
            st.integers(0, 500), st.integers(0, 500),
        ).filter(lambda t: sum(t) > 0)
    )
    def test_against_independent_marginals(self, counts):
        tn, fp, fn, tp = counts
        m = ConfusionMetrics.from_matrix(((tn, fp), (fn, tp)))
        total = tn + fp + fn + tp
        p_o = (tn + tp) / total
        p_e = ((tn + fp) / total) * ((tn + fn) / total) + (
            (fn + tp) / total
        ) * ((fp + tp) / total)
        assert m.accuracy == pytest.approx(p_o, abs=1e-9)
        if p_e != 1:
            assert m.kappa == pytest.approx((p_o - p_e) / (1 - p_e), abs=1e-9)
        assert -1.0 <= m.kappa <= 1.0 + 1e-12


class TestRulesFile:
    def test_round_trip(self, tmp_path):
        rs = mine_rules([("NP", "VP"), ("NP", "NP", "VP"), ("NP", "VP", "PP")])
        path = tmp_path / "rules.tsv"
        write_rules(rs, path)
        loaded = read_rules(path)
        assert [r.surface() for r in loaded] == [r.surface() for r in rs]
        assert [r.match_count for r in loaded] == [r.match_count for r in rs]
        assert loaded.total == rs.total

    def test_file_format(self, tmp_path):
        rs = mine_rules([("NP", "VP"), ("NP", "VP"), ("NP", "VP", "PP")])
        path = tmp_path / "rules.tsv"
        write_rules(rs, path)
        lines = path.read_text(encoding="utf-8").splitlines()
        assert lines[0] == "NP VP\t2\t66.67"
        assert lines[1] == "NP VP PP\t1\t33.33"
