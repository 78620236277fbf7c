"""Priming scores for trial-structured sequences.

Each data point receives a score in [0, 1] measuring how much closer it sits
to the centroid of the *previous* trial's class than to the centroid of its
own class (and of all remaining classes), where centroids are built only from
trials earlier in the sequence:

    score(x) = exp(-d(x, g_prev)/tau) / sum_j exp(-d(x, g_j)/tau)

with j ranging over the centroids that exist among {class, prev, other},
d the Euclidean distance and tau a temperature (default 0.1) controlling
softmax sharpness.

Scores are exact zeros, flagged as undefined, for:

* the first ``warmup_trials`` trials (no prior exposure to react to; the
  default warm-up equals the number of distinct classes in the sequence),
* any trial whose label repeats the previous trial's label (a same-class
  predecessor cannot prime by definition),
* any trial whose own-class or previous-class centroid has no supporting
  history.

When only two classes have been seen so far there is no "other" centroid and
the denominator reduces to the two remaining terms.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .core import (
    ClassLabel,
    DataPoint,
    SequenceDataset,
    Trial,
    distinct_classes_in_sequence,
    require_valid,
)

DEFAULT_TEMPERATURE = 0.1


@dataclass(frozen=True)
class ApsConfig:
    """Scoring parameters.

    ``warmup_trials=None`` means "use the number of distinct classes that
    appear in the sequence being scored".
    """

    temperature: float = DEFAULT_TEMPERATURE
    warmup_trials: int | None = None

    def __post_init__(self):
        if not (self.temperature > 0 and math.isfinite(self.temperature)):
            raise ValueError(f"temperature must be positive, got {self.temperature}")
        if self.warmup_trials is not None and self.warmup_trials < 0:
            raise ValueError("warmup_trials must be non-negative")


@dataclass(frozen=True, eq=False)
class CentroidSet:
    """Per-group centroids over the history before the current trial.

    A centroid is ``None`` when no history point falls into its group; the
    ``n_*`` counters record how many points back each present centroid.
    """

    g_class: np.ndarray | None
    g_prev: np.ndarray | None
    g_other: np.ndarray | None
    n_class: int = 0
    n_prev: int = 0
    n_other: int = 0


@dataclass(frozen=True, eq=False)
class ApsResult:
    """Per-point scores aligned to dataset order, plus per-trial aggregates.

    ``defined_mask`` is False exactly where a zero-score rule applied
    (warm-up, repeated label, missing centroid); those scores are exact 0.
    ``trial_indices``/``class_ids`` carry the structural alignment so results
    can be serialized and compared without the originating dataset.
    """

    scores: np.ndarray
    defined_mask: np.ndarray
    per_trial_mean: np.ndarray
    trial_indices: np.ndarray
    class_ids: np.ndarray

    def __post_init__(self):
        scores = np.asarray(self.scores, dtype=np.float64)
        mask = np.asarray(self.defined_mask, dtype=bool)
        per_trial = np.asarray(self.per_trial_mean, dtype=np.float64)
        tidx = np.asarray(self.trial_indices, dtype=np.int64)
        cids = np.asarray(self.class_ids, dtype=np.int64)
        n = scores.shape[0]
        if not (mask.shape[0] == tidx.shape[0] == cids.shape[0] == n):
            raise ValueError("score, mask and alignment arrays must have equal length")
        if n and (scores.min() < 0.0 or scores.max() > 1.0):
            raise ValueError("scores must lie in [0, 1]")
        if np.any(scores[~mask] != 0.0):
            raise ValueError("undefined scores must be exactly 0")
        for name, arr in (
            ("scores", scores),
            ("defined_mask", mask),
            ("per_trial_mean", per_trial),
            ("trial_indices", tidx),
            ("class_ids", cids),
        ):
            arr = arr.copy()
            arr.flags.writeable = False
            object.__setattr__(self, name, arr)

    @property
    def n_points(self) -> int:
        return int(self.scores.shape[0])


def compute_centroids(
    history: Sequence[Trial],
    current_label: ClassLabel,
    prev_label: ClassLabel,
) -> CentroidSet:
    """Group all points of the history trials and take per-group means.

    Groups are: the current trial's class, the previous trial's class, and
    everything else. Means are plain arithmetic means over individual points
    pooled across trials (no per-trial weighting).
    """
    if not history:
        raise ValueError("history is empty; apply the warm-up rule before scoring")
    groups: dict[str, list[np.ndarray]] = {"class": [], "prev": [], "other": []}
    for trial in history:
        if trial.label.id == current_label.id:
            key = "class"
        elif trial.label.id == prev_label.id:
            key = "prev"
        else:
            key = "other"
        for point in trial.points:
            groups[key].append(point.features)

    def mean_of(key: str) -> np.ndarray | None:
        rows = groups[key]
        return np.mean(np.stack(rows), axis=0) if rows else None

    return CentroidSet(
        g_class=mean_of("class"),
        g_prev=mean_of("prev"),
        g_other=mean_of("other"),
        n_class=len(groups["class"]),
        n_prev=len(groups["prev"]),
        n_other=len(groups["other"]),
    )


def priming_softmax(
    d_class: float,
    d_prev: float,
    d_other: float | None = None,
    temperature: float = DEFAULT_TEMPERATURE,
) -> float:
    """Softmax weight of the previous-class distance among the present distances.

    Evaluated in the shifted form (smallest distance subtracted before
    exponentiation) so that large distances under a small temperature cannot
    underflow every term to zero.
    """
    if temperature <= 0:
        raise ValueError(f"temperature must be positive, got {temperature}")
    distances = [d_class, d_prev] if d_other is None else [d_class, d_prev, d_other]
    for d in distances:
        if math.isnan(d):
            raise ValueError("distance is NaN")
    shift = min(distances)
    terms = [math.exp(-(d - shift) / temperature) for d in distances]
    return terms[1] / sum(terms)


def aps_point(x: DataPoint, cs: CentroidSet, cfg: ApsConfig) -> float:
    """Score one point against a centroid set.

    Requires the class and prev centroids to be present; the caller is
    responsible for mapping missing centroids to a zero score.
    """
    if cs.g_class is None or cs.g_prev is None:
        raise ValueError("class and prev centroids are required; caller must handle absence")
    d_class = float(np.linalg.norm(x.features - cs.g_class))
    d_prev = float(np.linalg.norm(x.features - cs.g_prev))
    d_other = None if cs.g_other is None else float(np.linalg.norm(x.features - cs.g_other))
    return priming_softmax(d_class, d_prev, d_other, cfg.temperature)


def resolve_warmup(ds: SequenceDataset, cfg: ApsConfig) -> int:
    """Warm-up trial count actually applied to a dataset under a config."""
    if cfg.warmup_trials is not None:
        return cfg.warmup_trials
    return distinct_classes_in_sequence(ds)


def score_sequence(ds: SequenceDataset, cfg: ApsConfig = ApsConfig()) -> ApsResult:
    """Score every data point of a sequence, trial by trial.

    Deterministic in (dataset, config). Scores for trial i depend only on
    trials 0..i, so under a fixed ``warmup_trials`` truncating or editing
    later trials never changes earlier scores (the default warm-up count is
    re-derived from the sequence and can shift when truncation drops a
    class). Raises :class:`~primescore.core.DatasetValidationError` if the
    dataset is malformed.
    """
    require_valid(ds)
    warmup = resolve_warmup(ds, cfg)

    scores: list[float] = []
    defined: list[bool] = []
    per_trial_mean = np.zeros(ds.n_trials)

    for i, trial in enumerate(ds.trials):
        if i < warmup or i == 0 or trial.label.id == ds.trials[i - 1].label.id:
            scores.extend(0.0 for _ in trial.points)
            defined.extend(False for _ in trial.points)
            continue
        prev_label = ds.trials[i - 1].label
        cs = compute_centroids(ds.trials[:i], trial.label, prev_label)
        if cs.g_class is None or cs.g_prev is None:
            scores.extend(0.0 for _ in trial.points)
            defined.extend(False for _ in trial.points)
            continue
        trial_scores = [aps_point(p, cs, cfg) for p in trial.points]
        per_trial_mean[i] = float(np.mean(trial_scores))
        scores.extend(trial_scores)
        defined.extend(True for _ in trial.points)

    return ApsResult(
        scores=np.array(scores),
        defined_mask=np.array(defined, dtype=bool),
        per_trial_mean=per_trial_mean,
        trial_indices=ds.point_trial_indices(),
        class_ids=ds.point_class_ids(),
    )


def mean_profile(results: Sequence[ApsResult]) -> np.ndarray:
    """Element-wise mean score across results from identically-structured sequences.

    All inputs must share point count, trial layout and label order; sequences
    following different stimulus orders must not be averaged together.
    """
    if not results:
        raise ValueError("mean_profile needs at least one result")
    first = results[0]
    for k, r in enumerate(results[1:], start=1):
        if r.n_points != first.n_points:
            raise ValueError(
                f"score length mismatch: input 0 has {first.n_points} points, "
                f"input {k} has {r.n_points}"
            )
        if not np.array_equal(r.trial_indices, first.trial_indices):
            raise ValueError(f"trial structure mismatch between inputs 0 and {k}")
        if not np.array_equal(r.class_ids, first.class_ids):
            raise ValueError(f"label order mismatch between inputs 0 and {k}")
    return np.mean(np.stack([r.scores for r in results]), axis=0)
