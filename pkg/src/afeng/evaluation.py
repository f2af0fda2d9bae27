"""Confusion matrices, classification reports, and Pearson correlation."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from afeng.errors import DegenerateInput, LengthMismatch
from afeng.labels import EMOTION_NAMES, NUM_EMOTIONS


@dataclass(frozen=True)
class ConfusionMatrix:
    counts: np.ndarray

    @property
    def total(self) -> int:
        return int(self.counts.sum())


@dataclass(frozen=True)
class ClassMetrics:
    precision: float
    recall: float
    f1: float
    support: int


@dataclass(frozen=True)
class ClassificationReport:
    per_class: tuple
    macro_precision: float
    macro_recall: float
    macro_f1: float
    total_support: int
    zero_denominators: bool


def confusion(true_labels: Sequence, predicted_labels: Sequence) -> ConfusionMatrix:
    if len(true_labels) != len(predicted_labels):
        raise LengthMismatch(
            f"{len(true_labels)} true labels vs {len(predicted_labels)} predictions"
        )
    if len(true_labels) == 0:
        raise DegenerateInput("no labels to tally")
    counts = np.zeros((NUM_EMOTIONS, NUM_EMOTIONS), dtype=np.int64)
    for t, p in zip(true_labels, predicted_labels):
        t, p = int(t), int(p)
        if not (0 <= t < NUM_EMOTIONS and 0 <= p < NUM_EMOTIONS):
            raise ValueError(f"label pair ({t}, {p}) outside the emotion codes")
        counts[t, p] += 1
    return ConfusionMatrix(counts=counts)


def report(cm: ConfusionMatrix) -> ClassificationReport:
    counts = cm.counts
    if counts.sum() == 0:
        raise DegenerateInput("empty confusion matrix")
    diag = np.diag(counts).astype(np.float64)
    col_sums = counts.sum(axis=0).astype(np.float64)
    row_sums = counts.sum(axis=1).astype(np.float64)

    zero_seen = False
    per_class = []
    for c in range(NUM_EMOTIONS):
        if col_sums[c] > 0:
            precision = diag[c] / col_sums[c]
        else:
            precision, zero_seen = 0.0, True
        if row_sums[c] > 0:
            recall = diag[c] / row_sums[c]
        else:
            recall, zero_seen = 0.0, True
        if precision + recall > 0:
            f1 = 2.0 * precision * recall / (precision + recall)
        else:
            f1, zero_seen = 0.0, True
        per_class.append(
            ClassMetrics(
                precision=float(precision),
                recall=float(recall),
                f1=float(f1),
                support=int(row_sums[c]),
            )
        )
    return ClassificationReport(
        per_class=tuple(per_class),
        macro_precision=float(np.mean([m.precision for m in per_class])),
        macro_recall=float(np.mean([m.recall for m in per_class])),
        macro_f1=float(np.mean([m.f1 for m in per_class])),
        total_support=int(counts.sum()),
        zero_denominators=zero_seen,
    )


def f1_score(precision: float, recall: float) -> float:
    if precision + recall == 0:
        return 0.0
    return 2.0 * precision * recall / (precision + recall)


# -- artifact formatting -----------------------------------------------------

def confusion_to_csv(cm: ConfusionMatrix) -> str:
    lines = ["," + ",".join(EMOTION_NAMES)]
    for name, row in zip(EMOTION_NAMES, cm.counts):
        lines.append(name + "," + ",".join(str(int(v)) for v in row))
    return "\n".join(lines) + "\n"


def report_to_csv(rep: ClassificationReport) -> str:
    lines = ["emotion,precision,recall,f1,support"]
    for name, m in zip(EMOTION_NAMES, rep.per_class):
        lines.append(f"{name},{m.precision!r},{m.recall!r},{m.f1!r},{m.support}")
    lines.append(
        f"macro,{rep.macro_precision!r},{rep.macro_recall!r},"
        f"{rep.macro_f1!r},{rep.total_support}"
    )
    return "\n".join(lines) + "\n"


def report_to_text(rep: ClassificationReport) -> str:
    width = max(len(name) for name in EMOTION_NAMES + ("Macro avg",))
    header = f"{'':<{width}}  Precision  Recall  F1-score  Support"
    lines = [header]
    for name, m in zip(EMOTION_NAMES, rep.per_class):
        lines.append(
            f"{name:<{width}}  {m.precision:9.2f}  {m.recall:6.2f}"
            f"  {m.f1:8.2f}  {m.support:7d}"
        )
    lines.append(
        f"{'Macro avg':<{width}}  {rep.macro_precision:9.2f}  {rep.macro_recall:6.2f}"
        f"  {rep.macro_f1:8.2f}  {rep.total_support:7d}"
    )
    if rep.zero_denominators:
        lines.append("note: metrics with zero denominators are reported as 0")
    return "\n".join(lines) + "\n"


# -- Pearson correlation -------------------------------------------------------

@dataclass(frozen=True)
class PearsonResult:
    r: float
    p: float


def _betacf(a: float, b: float, x: float) -> float:
    # continued fraction for the incomplete beta, modified Lentz method
    max_iter = 300
    eps = 3e-16
    fpmin = 1e-300
    qab, qap, qam = a + b, a + 1.0, a - 1.0
    c = 1.0
    d = 1.0 - qab * x / qap
    if abs(d) < fpmin:
        d = fpmin
    d = 1.0 / d
    h = d
    for m in range(1, max_iter + 1):
        m2 = 2 * m
        aa = m * (b - m) * x / ((qam + m2) * (a + m2))
        d = 1.0 + aa * d
        if abs(d) < fpmin:
            d = fpmin
        c = 1.0 + aa / c
        if abs(c) < fpmin:
            c = fpmin
        d = 1.0 / d
        h *= d * c
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2))
        d = 1.0 + aa * d
        if abs(d) < fpmin:
            d = fpmin
        c = 1.0 + aa / c
        if abs(c) < fpmin:
            c = fpmin
        d = 1.0 / d
        delta = d * c
        h *= delta
        if abs(delta - 1.0) < eps:
            break
    return h


def betainc(a: float, b: float, x: float) -> float:
    """Regularized incomplete beta function I_x(a, b)."""
    if x <= 0.0:
        return 0.0
    if x >= 1.0:
        return 1.0
    ln_front = (
        math.lgamma(a + b)
        - math.lgamma(a)
        - math.lgamma(b)
        + a * math.log(x)
        + b * math.log1p(-x)
    )
    front = math.exp(ln_front)
    if x < (a + 1.0) / (a + b + 2.0):
        return front * _betacf(a, b, x) / a
    return 1.0 - front * _betacf(b, a, 1.0 - x) / b


def pearson(x: Sequence, y: Sequence) -> PearsonResult:
    """Correlation coefficient with a two-tailed Student-t significance."""
    xs = np.asarray(x, dtype=np.float64)
    ys = np.asarray(y, dtype=np.float64)
    if xs.shape != ys.shape or xs.ndim != 1:
        raise LengthMismatch(f"shapes {xs.shape} and {ys.shape} differ")
    n = len(xs)
    if n < 3:
        raise DegenerateInput(f"need at least 3 points, found {n}")
    dx = xs - xs.mean()
    dy = ys - ys.mean()
    sxx = float(dx @ dx)
    syy = float(dy @ dy)
    if sxx == 0.0 or syy == 0.0:
        raise DegenerateInput("zero variance input")
    r = float(dx @ dy) / math.sqrt(sxx * syy)
    r = max(-1.0, min(1.0, r))
    if abs(r) == 1.0:
        return PearsonResult(r=r, p=0.0)
    df = n - 2
    t2 = r * r * df / (1.0 - r * r)
    p = betainc(df / 2.0, 0.5, df / (df + t2))
    return PearsonResult(r=r, p=float(p))
