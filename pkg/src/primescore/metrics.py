"""Priming error and accuracy over predicted labels of test-set points.

A prediction counts toward the priming error when the model assigns exactly
the previous trial's class and that class differs from the true one:

    PE = (1/N) * sum_i delta_i,
    delta_i = 1  if  predicted_i == prev_trial_label_i != true_label_i
              0  otherwise

N counts all evaluated points. Every PE-counted point is by definition a
misclassification, so PE <= 1 - accuracy always holds.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

from .core import ClassLabel


@dataclass(frozen=True)
class LabeledPrediction:
    """One scored test point: its trial, truth, predecessor class and prediction."""

    trial_index: int
    true_label: ClassLabel
    prev_trial_label: ClassLabel
    predicted_label: ClassLabel

    def __post_init__(self):
        if self.trial_index < 1:
            raise ValueError("trial_index must be >= 1 (a scored point needs a predecessor)")

    @property
    def delta(self) -> int:
        hit_prev = self.predicted_label.id == self.prev_trial_label.id
        cross_class = self.prev_trial_label.id != self.true_label.id
        return 1 if (hit_prev and cross_class) else 0


@dataclass(frozen=True)
class PrimingReport:
    """Aggregate priming error, accuracy and the per-trial PE distribution."""

    pe: float
    accuracy: float
    n_points: int
    per_trial_pe: dict[int, float] = field(default_factory=dict)

    def __post_init__(self):
        if not 0.0 <= self.pe <= 1.0:
            raise ValueError(f"pe must be in [0, 1], got {self.pe}")
        if not 0.0 <= self.accuracy <= 1.0:
            raise ValueError(f"accuracy must be in [0, 1], got {self.accuracy}")
        if self.pe > 1.0 - self.accuracy + 1e-12:
            raise ValueError("pe cannot exceed the misclassification rate")


def priming_error(preds: Sequence[LabeledPrediction]) -> PrimingReport:
    """Aggregate a list of labeled predictions into a priming report.

    The per-trial view uses each trial's own point count as denominator, so
    the aggregate PE is the point-count-weighted mean of the per-trial values.
    """
    if not preds:
        raise ValueError("cannot compute priming error over an empty prediction list")

    delta_total = 0
    correct = 0
    per_trial_delta: dict[int, int] = {}
    per_trial_n: dict[int, int] = {}
    for p in preds:
        d = p.delta
        delta_total += d
        if p.predicted_label.id == p.true_label.id:
            correct += 1
        per_trial_delta[p.trial_index] = per_trial_delta.get(p.trial_index, 0) + d
        per_trial_n[p.trial_index] = per_trial_n.get(p.trial_index, 0) + 1

    n = len(preds)
    per_trial_pe = {
        t: per_trial_delta[t] / per_trial_n[t] for t in sorted(per_trial_n)
    }
    return PrimingReport(
        pe=delta_total / n,
        accuracy=correct / n,
        n_points=n,
        per_trial_pe=per_trial_pe,
    )
