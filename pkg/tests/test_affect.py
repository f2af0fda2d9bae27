"""Appraisal and the canonical emotion/behavior mapping table."""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from afeng.affect import (
    AppraisalResult,
    EmotionDistribution,
    Valence,
    affect_table,
    appraise,
    blend_with_memory,
    derive_behaviors,
    map_agent_emotion,
)
from afeng.errors import InvalidDistribution
from afeng.labels import EMOTION_ORDER, EmotionLabel

# the full mapping, keyed by emotion code
TABLE = {
    EmotionLabel.ANTICIPATION: {
        "valence": Valence.POSITIVE,
        "event": "Make Happen",
        "agent_emotion": "Anticipation, Hope",
        "goal": "Find a family member Anticipate, Approach",
        "self": "Enthusiastic",
        "other": "Seek",
    },
    EmotionLabel.JOY: {
        "valence": Valence.POSITIVE,
        "event": "Safe, Sustain",
        "agent_emotion": "Joy",
        "goal": "Jump up, Celebrate",
        "self": "Retain",
        "other": "Affiliate",
    },
    EmotionLabel.TRUST: {
        "valence": Valence.POSITIVE,
        "event": "Support",
        "agent_emotion": "Pity, Trust",
        "goal": "Help a person",
        "self": "Accept, Rely",
        "other": "Help",
    },
    EmotionLabel.FEAR: {
        "valence": Valence.NEGATIVE,
        "event": "Get to safety, Prevent",
        "agent_emotion": "Fear",
        "goal": "Escape the risk, keep safe, get saved, Vigilance, "
                "Inhibition or Flight (run)",
        "self": "Defend, Protect",
        "other": "Escape",
    },
    EmotionLabel.SURPRISE: {
        "valence": Valence.NEUTRAL,
        "event": "The Unknown",
        "agent_emotion": "Surprise",
        "goal": "Nothing, Undefined",
        "self": "Startle",
        "other": "Examine",
    },
    EmotionLabel.SADNESS: {
        "valence": Valence.NEGATIVE,
        "event": "Terminate, Getaway",
        "agent_emotion": "Distress, Sadness",
        "goal": "Move around, Leave",
        "self": "Regret",
        "other": "Ignore",
    },
    EmotionLabel.DISGUST: {
        "valence": Valence.NEGATIVE,
        "event": "Dissociate",
        "agent_emotion": "Dislike, Disgust",
        "goal": "Withdraw, Conceal, Submit",
        "self": "Depart, Repel",
        "other": "Avoid",
    },
    EmotionLabel.ANGER: {
        "valence": Valence.NEGATIVE,
        "event": "Damage, Disappointment",
        "agent_emotion": "Anger",
        "goal": "Fight, Quarrel",
        "self": "Hate",
        "other": "Approach and Attack",
    },
}


def peaked(label: EmotionLabel, p: float = 1.0) -> EmotionDistribution:
    probs = np.full(8, (1.0 - p) / 7.0)
    probs[int(label)] = p
    return EmotionDistribution(probs)


# -- table totality and content -----------------------------------------------------

def test_table_covers_all_emotions_in_order():
    rows = affect_table()
    assert len(rows) == 8
    assert [row.emotion for row in rows] == list(EMOTION_ORDER)


@pytest.mark.parametrize("label", list(EMOTION_ORDER))
def test_table_row_content(label):
    row = affect_table()[int(label)]
    want = TABLE[label]
    assert row.valence == want["valence"]
    assert row.event == want["event"]
    assert row.agent_emotion == want["agent_emotion"]
    assert row.goal_behavior == want["goal"]
    assert row.self_behavior == want["self"]
    assert row.other_behavior == want["other"]


def test_valence_partition_3_1_4():
    by_valence = {v: 0 for v in Valence}
    for row in affect_table():
        by_valence[row.valence] += 1
    assert by_valence[Valence.POSITIVE] == 3
    assert by_valence[Valence.NEUTRAL] == 1
    assert by_valence[Valence.NEGATIVE] == 4


def test_self_other_pairs_distinct():
    pairs = {(row.self_behavior, row.other_behavior) for row in affect_table()}
    assert len(pairs) == 8
    behaviors = [row.self_behavior for row in affect_table()]
    behaviors += [row.other_behavior for row in affect_table()]
    assert len(set(behaviors)) == 16


@pytest.mark.parametrize("label", list(EMOTION_ORDER))
def test_derive_behaviors_total(label):
    bset = derive_behaviors(label)
    assert bset.goal_behavior == TABLE[label]["goal"]
    assert bset.self_behavior == TABLE[label]["self"]
    assert bset.other_behavior == TABLE[label]["other"]


@pytest.mark.parametrize("label", list(EMOTION_ORDER))
def test_map_agent_emotion_total(label):
    agent, valence = map_agent_emotion(label)
    assert agent == TABLE[label]["agent_emotion"]
    assert valence == TABLE[label]["valence"]


def test_valence_ranks():
    assert Valence.POSITIVE.rank == 0
    assert Valence.NEUTRAL.rank == 1
    assert Valence.NEGATIVE.rank == 2
    assert Valence.POSITIVE.value == "Positive"


# -- distribution validation -----------------------------------------------------------

def test_distribution_validates_shape():
    with pytest.raises(InvalidDistribution):
        EmotionDistribution(np.ones(7) / 7)


def test_distribution_validates_sum():
    probs = np.full(8, 0.2)
    with pytest.raises(InvalidDistribution):
        EmotionDistribution(probs)


def test_distribution_validates_range_and_finite():
    bad = np.array([1.2, -0.2, 0, 0, 0, 0, 0, 0])
    with pytest.raises(InvalidDistribution):
        EmotionDistribution(bad)
    nan = np.full(8, 0.125)
    nan[0] = np.nan
    with pytest.raises(InvalidDistribution):
        EmotionDistribution(nan)


def test_distribution_mapping_keys():
    dist = peaked(EmotionLabel.JOY, 0.44)
    mapping = dist.as_mapping()
    assert list(mapping) == [e.canonical_name for e in EMOTION_ORDER]
    assert mapping["Joy"] == pytest.approx(0.44)


# -- appraisal ---------------------------------------------------------------------------

@pytest.mark.parametrize("label", list(EMOTION_ORDER))
def test_appraise_peaked(label):
    result = appraise(peaked(label, 0.86))
    assert isinstance(result, AppraisalResult)
    assert result.dominant == label
    assert result.intensity == pytest.approx(0.86)
    assert result.valence == TABLE[label]["valence"]
    assert result.agent_emotion == TABLE[label]["agent_emotion"]
    assert result.event_goal == TABLE[label]["event"]


def test_appraise_uniform_resolves_to_anticipation():
    result = appraise(EmotionDistribution(np.full(8, 0.125)))
    assert result.dominant == EmotionLabel.ANTICIPATION
    assert result.intensity == pytest.approx(0.125)


def test_appraise_tie_prefers_better_valence():
    # equal mass on Fear (negative) and Joy (positive): Joy wins the tie
    probs = np.zeros(8)
    probs[int(EmotionLabel.FEAR)] = 0.5
    probs[int(EmotionLabel.JOY)] = 0.5
    assert appraise(EmotionDistribution(probs)).dominant == EmotionLabel.JOY


def test_appraise_tie_same_valence_prefers_lower_code():
    # Sadness (5) and Disgust (6) are both negative: lower code wins
    probs = np.zeros(8)
    probs[int(EmotionLabel.DISGUST)] = 0.5
    probs[int(EmotionLabel.SADNESS)] = 0.5
    assert appraise(EmotionDistribution(probs)).dominant == EmotionLabel.SADNESS


def test_appraise_near_tie_is_plain_argmax():
    probs = np.zeros(8)
    probs[int(EmotionLabel.FEAR)] = 0.5000001
    probs[int(EmotionLabel.JOY)] = 0.4999999
    assert appraise(EmotionDistribution(probs)).dominant == EmotionLabel.FEAR


@settings(max_examples=60, deadline=None)
@given(st.lists(st.floats(min_value=0.001, max_value=1.0), min_size=8, max_size=8))
def test_appraise_dominant_carries_max_probability(raw):
    probs = np.array(raw)
    probs = probs / probs.sum()
    dist = EmotionDistribution(probs)
    result = appraise(dist)
    assert probs[int(result.dominant)] == pytest.approx(probs.max())
    assert result.intensity == pytest.approx(probs.max())


# -- memory blending ----------------------------------------------------------------------

def test_blend_with_memory_zero_lambda_identity():
    now = peaked(EmotionLabel.ANGER, 0.9)
    past = [peaked(EmotionLabel.JOY, 0.9)]
    out = blend_with_memory(now, past, lam=0.0)
    np.testing.assert_allclose(out.probs, now.probs)


def test_blend_with_memory_convex():
    now = peaked(EmotionLabel.ANGER, 1.0)
    past = [peaked(EmotionLabel.JOY, 1.0)]
    out = blend_with_memory(now, past, lam=0.25)
    want = 0.75 * now.probs + 0.25 * past[0].probs
    np.testing.assert_allclose(out.probs, want, atol=1e-12)
    assert out.probs.sum() == pytest.approx(1.0)


def test_blend_with_memory_empty_history_identity():
    now = peaked(EmotionLabel.TRUST, 0.7)
    out = blend_with_memory(now, [], lam=0.5)
    np.testing.assert_allclose(out.probs, now.probs)


def test_blend_with_memory_averages_history():
    now = peaked(EmotionLabel.TRUST, 1.0)
    past = [peaked(EmotionLabel.JOY, 1.0), peaked(EmotionLabel.FEAR, 1.0)]
    out = blend_with_memory(now, past, lam=0.5)
    mean_past = (past[0].probs + past[1].probs) / 2
    want = 0.5 * now.probs + 0.5 * mean_past
    np.testing.assert_allclose(out.probs, want, atol=1e-12)


def test_blend_rejects_bad_lambda():
    now = peaked(EmotionLabel.TRUST, 1.0)
    with pytest.raises(ValueError):
        blend_with_memory(now, [], lam=1.5)
    with pytest.raises(ValueError):
        blend_with_memory(now, [], lam=-0.1)
