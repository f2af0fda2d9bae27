"""Appraisal of emotion distributions and the emotion -> behavior lexicon.

The lexicon (event, agent emotion, valence, and goal/self/other behaviors
per emotion) ships as a versioned JSON resource so it can be audited and
revised without touching code.
"""

from __future__ import annotations

import enum
import json
from dataclasses import dataclass
from functools import lru_cache
from importlib import resources as importlib_resources

import numpy as np

from afeng.errors import InvalidDistribution
from afeng.labels import NUM_EMOTIONS, EmotionLabel

DISTRIBUTION_TOLERANCE = 1e-9


class Valence(enum.Enum):
    POSITIVE = "Positive"
    NEUTRAL = "Neutral"
    NEGATIVE = "Negative"

    @property
    def rank(self) -> int:
        # tie-break precedence: positive responses win under uncertainty
        return {"Positive": 0, "Neutral": 1, "Negative": 2}[self.value]


@dataclass(frozen=True)
class AffectRow:
    emotion: EmotionLabel
    valence: Valence
    event: str
    agent_emotion: str
    goal_behavior: str
    self_behavior: str
    other_behavior: str


@dataclass(frozen=True)
class BehaviorSet:
    goal_behavior: str
    self_behavior: str
    other_behavior: str


@dataclass(frozen=True)
class AppraisalResult:
    dominant: EmotionLabel
    intensity: float
    valence: Valence
    agent_emotion: str
    event_goal: str


@dataclass(frozen=True)
class EmotionDistribution:
    probs: np.ndarray

    def __post_init__(self):
        probs = np.asarray(self.probs, dtype=np.float64)
        object.__setattr__(self, "probs", probs)
        if probs.shape != (NUM_EMOTIONS,):
            raise InvalidDistribution(
                f"expected {NUM_EMOTIONS} probabilities, found shape {probs.shape}"
            )
        if not np.isfinite(probs).all():
            raise InvalidDistribution("probabilities must be finite")
        if (probs < 0.0).any() or (probs > 1.0).any():
            raise InvalidDistribution("probabilities must lie in [0, 1]")
        total = float(probs.sum())
        if abs(total - 1.0) > DISTRIBUTION_TOLERANCE:
            raise InvalidDistribution(f"probabilities sum to {total}, not 1")

    def as_mapping(self) -> dict:
        return {
            label.canonical_name: float(self.probs[label]) for label in EmotionLabel
        }


@lru_cache(maxsize=1)
def affect_table() -> tuple:
    """Rows in canonical emotion order, loaded from the packaged lexicon."""
    raw = (
        importlib_resources.files("afeng.resources")
        .joinpath("affect_tables.json")
        .read_text(encoding="utf-8")
    )
    data = json.loads(raw)
    rows = []
    for entry in data["rows"]:
        rows.append(
            AffectRow(
                emotion=EmotionLabel.from_name(entry["emotion"]),
                valence=Valence(entry["valence"]),
                event=entry["event"],
                agent_emotion=entry["agent_emotion"],
                goal_behavior=entry["goal_behavior"],
                self_behavior=entry["self_behavior"],
                other_behavior=entry["other_behavior"],
            )
        )
    rows.sort(key=lambda row: int(row.emotion))
    if [row.emotion for row in rows] != list(EmotionLabel):
        raise ValueError("affect table must cover each emotion exactly once")
    return tuple(rows)


def map_agent_emotion(human: EmotionLabel) -> tuple:
    row = affect_table()[int(human)]
    return row.agent_emotion, row.valence


def derive_behaviors(dominant: EmotionLabel) -> BehaviorSet:
    row = affect_table()[int(dominant)]
    return BehaviorSet(
        goal_behavior=row.goal_behavior,
        self_behavior=row.self_behavior,
        other_behavior=row.other_behavior,
    )


def appraise(dist: EmotionDistribution) -> AppraisalResult:
    """Reduce a distribution to one dominant emotion.

    Exact ties are broken by valence precedence (Positive, then Neutral,
    then Negative) and then canonical emotion order.
    """
    probs = dist.probs
    peak = probs.max()
    candidates = [EmotionLabel(i) for i in np.flatnonzero(probs == peak)]
    table = affect_table()
    dominant = min(candidates, key=lambda lab: (table[int(lab)].valence.rank, int(lab)))
    row = table[int(dominant)]
    return AppraisalResult(
        dominant=dominant,
        intensity=float(peak),
        valence=row.valence,
        agent_emotion=row.agent_emotion,
        event_goal=row.event,
    )


def blend_with_memory(
    dist: EmotionDistribution, history: list, lam: float = 0.0
) -> EmotionDistribution:
    """Optional recency blend: (1-lam)*dist + lam*mean(recent distributions)."""
    if lam < 0.0 or lam > 1.0:
        raise ValueError("lam must lie in [0, 1]")
    if lam == 0.0 or not history:
        return dist
    mean = np.mean([h.probs for h in history], axis=0)
    mixed = (1.0 - lam) * dist.probs + lam * mean
    mixed = mixed / mixed.sum()
    return EmotionDistribution(probs=mixed)
