"""The eight basic emotions and their canonical order.

The integer codes are fixed: confusion-matrix axes, checkpoint headers and
the classifier's output layer all rely on this order.
"""

from __future__ import annotations

import enum


class EmotionLabel(enum.IntEnum):
    ANTICIPATION = 0
    JOY = 1
    TRUST = 2
    FEAR = 3
    SURPRISE = 4
    SADNESS = 5
    DISGUST = 6
    ANGER = 7

    @property
    def canonical_name(self) -> str:
        return self.name.capitalize()

    @classmethod
    def from_name(cls, name: str) -> "EmotionLabel":
        """Case-insensitive lookup; raises KeyError for anything else."""
        return cls[name.strip().upper()]


EMOTION_ORDER: tuple[EmotionLabel, ...] = tuple(EmotionLabel)
EMOTION_NAMES: tuple[str, ...] = tuple(e.canonical_name for e in EMOTION_ORDER)
NUM_EMOTIONS = len(EMOTION_ORDER)
