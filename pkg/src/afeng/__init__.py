"""Emotion-oriented behavior engine.

Classifies short English sentences into the eight basic emotions with a
hand-built multichannel CNN-LSTM, appraises a dominant agent emotion with
valence, maps it to goal/self/other behaviors, and emits Behavioral Markup
Language documents for facial expressions and gestures.
"""

__version__ = "0.1.0"

from afeng.labels import EmotionLabel

__all__ = ["EmotionLabel", "__version__"]
