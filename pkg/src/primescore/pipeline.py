"""Paired original-vs-filtered evaluation over a train/test trial split.

The sequence is scored once in full order, the training prefix is filtered by
score threshold, and for every training seed both arms (unfiltered and
filtered training set) are trained and tested on the identical untouched test
portion. Predecessor labels for the test points come from the original trial
adjacency, so removing points never changes what counts as a priming error.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Sequence

import numpy as np

from .classifiers import TrainConfig, predict, train
from .core import SequenceDataset, require_valid, truncate_dataset
from .filtering import FilterConfig, FilterOutcome, filter_by_aps
from .metrics import LabeledPrediction, PrimingReport, priming_error
from .scoring import ApsConfig, ApsResult, score_sequence


@dataclass(frozen=True)
class EvaluationRun:
    """One training seed: reports for the unfiltered and filtered arms."""

    seed: int
    original: PrimingReport
    filtered: PrimingReport


@dataclass(frozen=True)
class EvaluationResult:
    train_trials: int
    runs: tuple[EvaluationRun, ...]
    filter_outcome: FilterOutcome

    def summary(self) -> dict:
        """Across-seed means, stds and the strict per-seed win count."""
        orig_pe = np.array([r.original.pe for r in self.runs])
        filt_pe = np.array([r.filtered.pe for r in self.runs])
        orig_acc = np.array([r.original.accuracy for r in self.runs])
        filt_acc = np.array([r.filtered.accuracy for r in self.runs])
        return {
            "n_runs": len(self.runs),
            "original_pe_mean": float(orig_pe.mean()),
            "original_pe_std": float(orig_pe.std()),
            "filtered_pe_mean": float(filt_pe.mean()),
            "filtered_pe_std": float(filt_pe.std()),
            "original_accuracy_mean": float(orig_acc.mean()),
            "original_accuracy_std": float(orig_acc.std()),
            "filtered_accuracy_mean": float(filt_acc.mean()),
            "filtered_accuracy_std": float(filt_acc.std()),
            "filtered_wins": int(np.sum(filt_pe < orig_pe)),
            "removed_count": self.filter_outcome.removed_count,
            "removed_fraction": self.filter_outcome.removed_fraction,
            "emptied_trial_indices": list(self.filter_outcome.emptied_trial_indices),
        }


def slice_scores(aps: ApsResult, train_trials: int) -> ApsResult:
    """Restrict a full-sequence score result to the first train_trials trials."""
    mask = aps.trial_indices < train_trials
    return ApsResult(
        scores=aps.scores[mask],
        defined_mask=aps.defined_mask[mask],
        per_trial_mean=aps.per_trial_mean[:train_trials],
        trial_indices=aps.trial_indices[mask],
        class_ids=aps.class_ids[mask],
    )


def evaluate_sequence(
    ds: SequenceDataset,
    train_trials: int,
    seeds: Sequence[int] = (0, 1, 2, 3, 4),
    train_config: TrainConfig = TrainConfig(),
    aps_config: ApsConfig = ApsConfig(),
    filter_config: FilterConfig = FilterConfig(),
) -> EvaluationResult:
    """Run the paired evaluation; raises ValueError on a degenerate split."""
    require_valid(ds)
    if not 1 <= train_trials < ds.n_trials:
        raise ValueError(
            f"train_trials must be in [1, {ds.n_trials - 1}] "
            f"for a {ds.n_trials}-trial sequence, got {train_trials}"
        )
    if not seeds:
        raise ValueError("seeds must be non-empty")

    aps_full = score_sequence(ds, aps_config)
    train_ds = truncate_dataset(ds, train_trials)
    outcome = filter_by_aps(
        train_ds, slice_scores(aps_full, train_trials), filter_config
    )
    filtered_ds = outcome.kept

    test: list[tuple] = []
    for i in range(train_trials, ds.n_trials):
        trial = ds.trials[i]
        prev_label = ds.trials[i - 1].label
        for point in trial.points:
            test.append((point, trial.trial_index, trial.label, prev_label))
    test_points = [p for p, _, _, _ in test]

    runs = []
    for seed in seeds:
        cfg = replace(train_config, seed=seed)
        reports = {}
        for arm, arm_ds in (("original", train_ds), ("filtered", filtered_ds)):
            model = train(arm_ds.trials, cfg)
            predicted = predict(model, test_points)
            preds = [
                LabeledPrediction(t_idx, true, prev, pred)
                for (_, t_idx, true, prev), pred in zip(test, predicted)
            ]
            reports[arm] = priming_error(preds)
        runs.append(EvaluationRun(seed, reports["original"], reports["filtered"]))

    return EvaluationResult(
        train_trials=train_trials,
        runs=tuple(runs),
        filter_outcome=outcome,
    )
