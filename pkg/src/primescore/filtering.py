"""Threshold filtering: drop points whose priming score exceeds a threshold.

Removal uses a strict inequality (score > threshold), so boundary points at
exactly the threshold survive. Trial structure is always preserved: a trial
whose points are all removed stays in the sequence as an empty placeholder
(and is flagged), because later trials' adjacency must not shift.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import DataPoint, SequenceDataset, Trial
from .scoring import ApsResult

DEFAULT_THRESHOLD = 0.7


class AlignmentError(ValueError):
    """Scores do not line up with the dataset they are applied to."""


@dataclass(frozen=True)
class FilterConfig:
    threshold: float = DEFAULT_THRESHOLD

    def __post_init__(self):
        if not 0.0 < self.threshold <= 1.0:
            raise ValueError(f"threshold must be in (0, 1], got {self.threshold}")


@dataclass(frozen=True, eq=False)
class FilterOutcome:
    """Filtered dataset plus bookkeeping about what was removed.

    ``removed_index_list[i]`` holds the original in-trial indices removed from
    trial i; ``emptied_trial_indices`` flags placeholder trials left with zero
    points.
    """

    kept: SequenceDataset
    removed_count: int
    removed_fraction: float
    removed_index_list: tuple[tuple[int, ...], ...]
    emptied_trial_indices: tuple[int, ...]


def filter_by_aps(
    ds: SequenceDataset,
    aps: ApsResult,
    cfg: FilterConfig = FilterConfig(),
) -> FilterOutcome:
    """Remove exactly the points whose score exceeds the threshold.

    Kept points are renumbered contiguously within each trial; trial order
    and labels are untouched. Warm-up and repeated-label trials carry exact
    zero scores, so they are never filtered.
    """
    if aps.n_points != ds.n_points:
        raise AlignmentError(
            f"scores cover {aps.n_points} points but dataset has {ds.n_points}"
        )
    if not np.array_equal(aps.trial_indices, ds.point_trial_indices()):
        raise AlignmentError("score trial structure does not match the dataset")

    new_trials: list[Trial] = []
    removed_lists: list[tuple[int, ...]] = []
    emptied: list[int] = []
    removed_count = 0
    pos = 0
    for trial in ds.trials:
        kept_points: list[DataPoint] = []
        removed_here: list[int] = []
        for point in trial.points:
            if aps.scores[pos] > cfg.threshold:
                removed_here.append(point.index_in_trial)
            else:
                kept_points.append(DataPoint(point.features, len(kept_points)))
            pos += 1
        removed_count += len(removed_here)
        removed_lists.append(tuple(removed_here))
        if trial.points and not kept_points:
            emptied.append(trial.trial_index)
        new_trials.append(Trial(trial.trial_index, trial.label, tuple(kept_points)))

    total = ds.n_points
    return FilterOutcome(
        kept=SequenceDataset(ds.subject_id, ds.session_id, tuple(new_trials), ds.class_set),
        removed_count=removed_count,
        removed_fraction=removed_count / total if total else 0.0,
        removed_index_list=tuple(removed_lists),
        emptied_trial_indices=tuple(emptied),
    )
