"""Support statistics, phrase mappings, and the explanation templates."""
import copy
import math
import random

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from navex.advisors import Tier1Outcome
from navex.controller import CommentMatrix, DecisionRecord
from navex.explain import (CLEAR_PREFERENCE, OMISSION_HIGH, OMISSION_LOW,
                           compute_stats, explain_confidence,
                           explain_hypothetical, explain_why, explain_why_not,
                           Explanation)
from navex.phrases import (DEFAULT_TABLE, action_phrase, default_phrase_table,
                           join_clauses)
from navex.spatial import SpatialModel
from navex.world import Action, Pose
from tests.conftest import make_state, random_matrix

# the worked four-advisor / four-action strength example
EXAMPLE = np.array([
    [0.0, 1.0, 1.0, 10.0],
    [0.0, 8.0, 9.0, 10.0],
    [2.0, 0.0, 10.0, 2.0],
    [3.0, 10.0, 1.0, 0.0],
])
EXAMPLE_T = np.array([
    [-0.64, -0.43, -0.43, 1.49],
    [-1.48, 0.27, 0.49, 0.71],
    [-0.34, -0.79, 1.47, -0.34],
    [-0.11, 1.44, -0.55, -0.78],
])

CANDIDATES = [Action("move", i, m) for i, m in
              enumerate((0.2, 0.4, 0.8, 1.6))]
FIVE_MOVES = [Action("move", i, m) for i, m in
              enumerate((0.0, 0.2, 0.4, 0.8, 1.6))]


def make_tier3_record(strengths, advisors, chosen_index,
                      candidates=CANDIDATES) -> DecisionRecord:
    matrix = CommentMatrix(advisors=list(advisors), actions=candidates,
                           strengths=np.asarray(strengths, float))
    return DecisionRecord(phase="move", candidates=candidates,
                          tier1=Tier1Outcome(), chosen=candidates[chosen_index],
                          decided_by="tier3", cycle_index=0, comments=matrix)


class TestComputeStats:
    def test_worked_example_t_supports(self):
        stats = compute_stats(EXAMPLE)
        np.testing.assert_allclose(stats.t_support, EXAMPLE_T, atol=0.01)

    def test_worked_example_aggregates(self):
        stats = compute_stats(EXAMPLE)
        np.testing.assert_allclose(stats.column_sums, [5, 19, 21, 22])
        assert stats.agreement[3] == pytest.approx(0.495, abs=0.005)
        assert stats.overall[3] == pytest.approx(0.66, abs=0.01)
        assert stats.overall[3] - stats.overall[1] == pytest.approx(0.38, abs=0.01)
        assert stats.confidence[3] == pytest.approx((0.5 - 0.495) * 0.66, abs=0.01)

    def test_rows_standardized(self):
        rng = np.random.default_rng(5)
        for _ in range(100):
            stats = compute_stats(random_matrix(rng))
            for row in stats.t_support:
                if np.ptp(row) > 0:
                    assert row.mean() == pytest.approx(0.0, abs=1e-9)
                    assert row.std(ddof=1) == pytest.approx(1.0, abs=1e-9)

    def test_zero_spread_row_is_all_zero(self):
        stats = compute_stats(np.array([[4.0, 4.0, 4.0], [0.0, 5.0, 10.0]]))
        np.testing.assert_allclose(stats.t_support[0], 0.0)

    def test_agreement_bounds_and_peak(self):
        rng = np.random.default_rng(6)
        for _ in range(200):
            stats = compute_stats(random_matrix(rng))
            assert np.all(stats.agreement >= 0.0)
            assert np.all(stats.agreement <= 0.5)
        # mean normalized strength exactly 0.5 peaks the impurity
        stats = compute_stats(np.array([[5.0, 1.0], [5.0, 2.0]]))
        assert stats.agreement[0] == pytest.approx(0.5)

    def test_single_action_is_degenerate(self):
        stats = compute_stats(np.array([[7.0], [2.0]]))
        assert stats.degenerate
        np.testing.assert_allclose(stats.overall, 0.0)

    def test_tied_columns_are_degenerate(self):
        stats = compute_stats(np.array([[3.0, 3.0], [4.0, 4.0]]))
        assert stats.degenerate
        np.testing.assert_allclose(stats.overall, 0.0)

    def test_invalid_input_rejected(self):
        with pytest.raises(ValueError):
            compute_stats(np.empty((0, 0)))
        with pytest.raises(ValueError):
            compute_stats(np.zeros(4))


class TestPhraseTable:
    @pytest.mark.parametrize("value,phrase", [
        (-2.0, "really don't want"), (-1.5, "really don't want"),
        (-0.75, "don't want"), (-0.5, "somewhat don't want"),
        (0.0, "somewhat don't want"), (0.5, "somewhat want"),
        (0.75, "somewhat want"), (1.5, "want"), (1.51, "really want"),
    ])
    def test_t_support_boundaries_right_inclusive(self, value, phrase):
        assert DEFAULT_TABLE.map_phrase("t_support", value) == phrase

    @pytest.mark.parametrize("value,phrase,label", [
        (0.0, "I've got many reasons", "high"),
        (0.25, "I've got many reasons", "high"),
        (0.3, "I've only got a few reasons", "medium"),
        (0.46, "my reasons conflict", "low"),
    ])
    def test_agreement_intervals(self, value, phrase, label):
        assert DEFAULT_TABLE.map_phrase("agreement", value) == phrase
        assert DEFAULT_TABLE.label("agreement", value) == label

    @pytest.mark.parametrize("metric,uppers", [
        ("overall_support", (0.75, 1.5)),
        ("confidence", (0.0375, 0.375)),
        ("support_diff", (0.75, 1.5)),
    ])
    def test_totality_at_every_boundary(self, metric, uppers):
        table = default_phrase_table()
        probes = [-1e9, 1e9]
        for u in uppers:
            probes += [u - 1e-12, u, u + 1e-12]
        for v in probes:
            phrase = table.map_phrase(metric, v)
            assert isinstance(phrase, str)
            # exactly one interval claims the value
            hits = [iv for iv in table.metrics[metric] if v <= iv.upper]
            assert phrase == hits[0].phrase if hits else True

    def test_unknown_metric_rejected(self):
        with pytest.raises(KeyError):
            DEFAULT_TABLE.map_phrase("zeal", 0.0)


class TestActionPhrases:
    @pytest.mark.parametrize("action,text", [
        (Action("move", 0, 0.0), "wait"),
        (Action("move", 1, 0.2), "inch forward"),
        (Action("move", 2, 0.4), "move forward"),
        (Action("move", 3, 0.8), "move far forward"),
        (Action("move", 4, 1.6), "move forward a lot"),
        (Action("turn", 0, 0.25), "shift left a bit"),
        (Action("turn", 1, -0.25), "shift right a bit"),
        (Action("turn", 2, 0.5), "turn left"),
        (Action("turn", 5, -1.0), "bear right"),
        (Action("turn", 7, -1.57), "turn hard right"),
    ])
    def test_base_forms(self, action, text):
        assert action_phrase(action) == text

    def test_gerund_forms(self):
        assert action_phrase(Action("move", 0, 0.0), "gerund") == "waiting"
        assert action_phrase(Action("move", 1, 0.2), "gerund") == "inching forward"
        assert action_phrase(Action("turn", 0, 0.25), "gerund") == "shifting left a bit"

    def test_unknown_magnitude_rejected(self):
        with pytest.raises(KeyError):
            action_phrase(Action("move", 9, 0.3))

    def test_join_clauses(self):
        assert join_clauses([]) == ""
        assert join_clauses(["a"]) == "a"
        assert join_clauses(["a", "b"]) == "a and b"
        assert join_clauses(["a", "b", "c"]) == "a, b, and c"


class TestExplainWhy:
    def test_worked_example_golden_sentence(self):
        rec = make_tier3_record(EXAMPLE,
                                ["greedy", "elbowroom", "convey", "explorer"], 3)
        exp = explain_why(rec)
        assert exp.text == ("Although I don't want to go somewhere I've been, "
                            "I decided to move forward a lot because I want to "
                            "get close to our target.")
        assert exp.contributors == {"support": ["greedy"],
                                    "oppose": ["explorer"]}

    def test_single_supporter_no_although(self):
        strengths = np.array([
            [0.0, 1.0, 1.0, 10.0],   # lone strong supporter of a4
            [5.0, 5.0, 5.0, 5.0],
            [4.0, 5.0, 5.0, 6.0],
        ])
        rec = make_tier3_record(strengths, ["greedy", "bigstep", "convey"], 3)
        exp = explain_why(rec)
        assert exp.text.startswith("I decided to move forward a lot because")
        assert "Although" not in exp.text
        assert exp.contributors["oppose"] == []

    def test_omission_filter_on_contributors(self):
        rng = np.random.default_rng(9)
        advisors = ["greedy", "bigstep", "elbowroom", "goaround", "explorer",
                    "convey"]
        for _ in range(200):
            m = np.round(rng.uniform(0, 10, size=(4, 4)), 2)
            rec = make_tier3_record(m, advisors[:4], int(m.sum(0).argmax()))
            exp = explain_why(rec)
            stats = compute_stats(m)
            k = rec.chosen.intensity_index - 0  # candidates are index-aligned
            k = CANDIDATES.index(rec.chosen)
            tcol = stats.t_support[:, k]
            idx = {a: i for i, a in enumerate(advisors[:4])}
            qualifying = [a for a in advisors[:4]
                          if not (OMISSION_LOW < tcol[idx[a]] <= OMISSION_HIGH)]
            for a in exp.contributors["oppose"]:
                assert tcol[idx[a]] <= OMISSION_LOW
            if qualifying and any(tcol[idx[a]] > OMISSION_HIGH for a in qualifying):
                for a in exp.contributors["support"]:
                    assert tcol[idx[a]] > OMISSION_HIGH

    def test_mandate_sentence(self, box_world, fast_config):
        rec = DecisionRecord(phase="move", candidates=CANDIDATES,
                             tier1=Tier1Outcome(mandate=CANDIDATES[3],
                                                deciding_advisor="victory"),
                             chosen=CANDIDATES[3], decided_by="tier1_mandate",
                             cycle_index=0)
        assert explain_why(rec).text == ("I could see our target and moving "
                                         "forward a lot would get us closer "
                                         "to it.")

    def test_lastleft_pause_sentence(self):
        pause = Action("move", 0, 0.0)
        rec = DecisionRecord(phase="move", candidates=[pause] + CANDIDATES,
                             tier1=Tier1Outcome(vetoes={a.key(): "avoidwalls"
                                                        for a in CANDIDATES}),
                             chosen=pause, decided_by="tier1_lastleft",
                             cycle_index=0)
        assert explain_why(rec).text == ("I decided to wait because there's "
                                         "not enough room to move forward.")

    def test_explanation_is_pure(self):
        rec = make_tier3_record(EXAMPLE,
                                ["greedy", "elbowroom", "convey", "explorer"], 3)
        before = copy.deepcopy(rec.comments.strengths)
        explain_why(rec)
        explain_confidence(rec)
        explain_why_not(rec, CANDIDATES[1])
        np.testing.assert_array_equal(rec.comments.strengths, before)


class TestExplainConfidence:
    def test_worked_example_golden_sentence(self):
        rec = make_tier3_record(EXAMPLE,
                                ["greedy", "elbowroom", "convey", "explorer"], 3)
        assert explain_confidence(rec).text == (
            "I'm not sure about my decision because my reasons conflict. "
            "I don't really want to do this more than anything else.")

    def test_one_statistic_agrees(self):
        # G low agrees with L low while T is medium: only the G phrase appears
        strengths = np.array([
            [3.0, 4.5, 4.0, 7.0],
            [5.0, 5.0, 5.0, 5.0],
        ])
        stats = compute_stats(strengths)
        assert DEFAULT_TABLE.label("agreement", stats.agreement[3]) == "low"
        assert DEFAULT_TABLE.label("overall_support", stats.overall[3]) == "medium"
        assert DEFAULT_TABLE.label("confidence", stats.confidence[3]) == "low"
        rec = make_tier3_record(strengths, ["greedy", "bigstep"], 3)
        assert explain_confidence(rec).text == (
            "I'm not sure about my decision because my reasons conflict.")

    def test_neither_agrees_orders_lower_then_higher(self):
        # G label low, T label high, L lands medium; needs five candidates
        # because the largest possible T over m columns is (m-1)/sqrt(m)
        strengths = np.array([
            [1.0, 1.0, 1.0, 1.0, 7.83],
            [5.0, 5.0, 5.0, 5.0, 5.0],
        ])
        stats = compute_stats(strengths)
        g, t, l = (DEFAULT_TABLE.label("agreement", stats.agreement[4]),
                   DEFAULT_TABLE.label("overall_support", stats.overall[4]),
                   DEFAULT_TABLE.label("confidence", stats.confidence[4]))
        assert g == "low" and t == "high" and l == "medium"
        rec = make_tier3_record(strengths, ["greedy", "bigstep"], 4,
                                candidates=FIVE_MOVES)
        text = explain_confidence(rec).text
        assert text == ("I'm only somewhat sure about my decision because, "
                        "even though my reasons conflict, I really want to do "
                        "this the most.")

    def test_tier1_fixed_sentences(self):
        rec = DecisionRecord(phase="move", candidates=CANDIDATES,
                             tier1=Tier1Outcome(mandate=CANDIDATES[3],
                                                deciding_advisor="victory"),
                             chosen=CANDIDATES[3], decided_by="tier1_mandate",
                             cycle_index=0)
        assert explain_confidence(rec).text == (
            "Highly confident, since our target is in sensor range and this "
            "would get us closer to it.")
        pause = Action("move", 0, 0.0)
        rec2 = DecisionRecord(phase="move", candidates=[pause],
                              tier1=Tier1Outcome(), chosen=pause,
                              decided_by="tier1_lastleft", cycle_index=0)
        assert explain_confidence(rec2).text == (
            "Highly confident, since there is not enough room to move forward.")


class TestExplainWhyNot:
    def test_worked_example_golden_sentence(self):
        rec = make_tier3_record(EXAMPLE,
                                ["greedy", "elbowroom", "convey", "explorer"], 3)
        exp = explain_why_not(rec, CANDIDATES[1])
        assert exp.text == (
            "I thought about moving forward because it would let us go "
            "somewhere new, but I felt slightly more strongly about moving "
            "forward a lot since it lets us get closer to our target.")
        assert exp.contributors == {"support": ["greedy"],
                                    "oppose": ["explorer"]}

    def test_clear_preference_filter(self):
        rng = np.random.default_rng(13)
        advisors = ["greedy", "bigstep", "elbowroom", "explorer"]
        for _ in range(200):
            m = np.round(rng.uniform(0, 10, size=(4, 4)), 2)
            k = int(m.sum(0).argmax())
            rec = make_tier3_record(m, advisors, k)
            j = (k + 1) % 4
            exp = explain_why_not(rec, CANDIDATES[j])
            stats = compute_stats(m)
            diffs = stats.t_support[:, k] - stats.t_support[:, j]
            idx = {a: i for i, a in enumerate(advisors)}
            for a in exp.contributors["oppose"]:
                assert diffs[idx[a]] < -CLEAR_PREFERENCE
            if any(d > CLEAR_PREFERENCE for d in diffs):
                for a in exp.contributors["support"]:
                    assert diffs[idx[a]] > CLEAR_PREFERENCE

    def test_no_clear_preference_drops_parenthetical(self):
        strengths = np.array([
            [5.0, 5.2, 5.1, 5.3],
            [5.1, 5.0, 5.2, 5.3],
        ])
        rec = make_tier3_record(strengths, ["greedy", "bigstep"], 3)
        exp = explain_why_not(rec, CANDIDATES[0])
        assert "because it would let us" not in exp.text
        assert exp.text.startswith("I thought about inching forward, but I felt")

    def test_vetoed_alternative_quotes_rationale(self):
        rec = make_tier3_record(EXAMPLE,
                                ["greedy", "elbowroom", "convey", "explorer"], 3)
        rec.tier1 = Tier1Outcome(vetoes={CANDIDATES[2].key(): "avoidwalls"})
        exp = explain_why_not(rec, CANDIDATES[2])
        assert exp.text == ("I decided not to move far forward because the "
                            "wall was in the way.")

    def test_mandate_alternative_sentence(self):
        rec = DecisionRecord(phase="move", candidates=CANDIDATES,
                             tier1=Tier1Outcome(mandate=CANDIDATES[3],
                                                deciding_advisor="victory"),
                             chosen=CANDIDATES[3], decided_by="tier1_mandate",
                             cycle_index=0)
        exp = explain_why_not(rec, CANDIDATES[0])
        assert exp.text == ("I decided not to inch forward because I sense our "
                            "goal and another action would get us closer to it.")

    def test_invalid_alternatives_rejected(self):
        rec = make_tier3_record(EXAMPLE,
                                ["greedy", "elbowroom", "convey", "explorer"], 3)
        with pytest.raises(ValueError):
            explain_why_not(rec, rec.chosen)
        with pytest.raises(ValueError):
            explain_why_not(rec, Action("turn", 0, 0.25))


class TestHypothetical:
    def test_uses_conditional_stem(self, box_world, fast_config):
        state = make_state(box_world, Pose(5, 5, 0.75), (1, 9), fast_config)
        exp = explain_hypothetical(state, SpatialModel(), fast_config,
                                   phase="turn")
        assert exp.question == "hypothetical"
        assert "I would " in exp.text or exp.text.startswith("I could see")

    def test_deterministic_and_pure(self, box_world, fast_config):
        state = make_state(box_world, Pose(5, 5, 0.75), (1, 9), fast_config)
        model = SpatialModel()
        a = explain_hypothetical(state, model, fast_config, phase="turn")
        b = explain_hypothetical(state, model, fast_config, phase="turn")
        assert a.text == b.text
        assert model.regions == [] and model.trails == []


def test_explanation_requires_terminal_punctuation():
    with pytest.raises(ValueError):
        Explanation("why", "no full stop")
    exp = Explanation("why", "Fine.")
    d = exp.to_dict()
    assert d["question"] == "why" and d["text"] == "Fine."
