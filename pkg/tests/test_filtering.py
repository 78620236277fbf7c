"""Threshold filtering: removal sets, structure preservation, alignment checks."""

import numpy as np
import pytest

from primescore.core import DatasetValidationError, require_valid, validate_dataset
from primescore.filtering import (
    DEFAULT_THRESHOLD,
    AlignmentError,
    FilterConfig,
    FilterOutcome,
    filter_by_aps,
)
from primescore.scoring import ApsConfig, ApsResult, score_sequence

from conftest import make_dataset


def _random_dataset(rng, n_classes=3, n_trials=8, dim=3, lo=5, hi=12):
    labels = [int(rng.integers(0, n_classes)) for _ in range(n_trials)]
    for c in range(n_classes):  # every class appears at least once so ids stay dense
        labels[c % n_trials] = c
    feats = [rng.normal(size=(int(rng.integers(lo, hi)), dim)) for _ in range(n_trials)]
    return make_dataset(labels, feats)


def _synthetic_result(ds, scores):
    scores = np.asarray(scores, dtype=np.float64)
    tidx = ds.point_trial_indices()
    cids = ds.point_class_ids()
    mask = scores != 0.0
    per_trial = np.zeros(ds.n_trials)
    for t in range(ds.n_trials):
        sel = tidx == t
        per_trial[t] = scores[sel].mean() if sel.any() else 0.0
    return ApsResult(scores, mask, per_trial, tidx, cids)


def _oracle_filter(ds, scores, threshold):
    """Independent reconstruction: keep score <= threshold, renumber per trial."""
    kept = []
    removed_lists = []
    emptied = []
    pos = 0
    removed = 0
    for trial in ds.trials:
        rows = []
        removed_here = []
        for point in trial.points:
            if scores[pos] > threshold:
                removed_here.append(point.index_in_trial)
                removed += 1
            else:
                rows.append(point.features)
            pos += 1
        if trial.points and not rows:
            emptied.append(trial.trial_index)
        removed_lists.append(tuple(removed_here))
        kept.append(rows)
    return kept, tuple(removed_lists), tuple(emptied), removed


class TestFilterConfig:
    def test_default_threshold(self):
        assert FilterConfig().threshold == DEFAULT_THRESHOLD == 0.7

    @pytest.mark.parametrize("bad", [0.0, -0.1, 1.0001, 2.0])
    def test_rejects_out_of_range_threshold(self, bad):
        with pytest.raises(ValueError):
            FilterConfig(threshold=bad)

    def test_threshold_one_allowed(self):
        assert FilterConfig(threshold=1.0).threshold == 1.0


class TestRemovalSet:
    def test_matches_brute_force_on_random_sequences(self, rng):
        for _ in range(25):
            ds = _random_dataset(rng)
            aps = score_sequence(ds)
            threshold = float(rng.uniform(0.05, 0.95))
            outcome = filter_by_aps(ds, aps, FilterConfig(threshold=threshold))
            kept, removed_lists, emptied, removed = _oracle_filter(
                ds, aps.scores, threshold
            )
            assert outcome.removed_index_list == removed_lists
            assert outcome.emptied_trial_indices == emptied
            assert outcome.removed_count == removed
            assert outcome.removed_fraction == removed / ds.n_points
            assert outcome.kept.n_trials == ds.n_trials
            for trial, rows in zip(outcome.kept.trials, kept):
                got = trial.feature_matrix()
                assert got.shape[0] == len(rows)
                for row_got, row_want in zip(got, rows):
                    assert np.array_equal(row_got, row_want)

    def test_strict_inequality_at_boundary(self):
        ds = make_dataset([0, 1], [np.zeros((3, 2)), np.ones((3, 2))])
        scores = np.array([0.0, 0.0, 0.0, 0.7, 0.7000000001, 0.69])
        outcome = filter_by_aps(ds, _synthetic_result(ds, scores), FilterConfig(0.7))
        # Only the score strictly above 0.7 goes; the exact-threshold point stays.
        assert outcome.removed_index_list == ((), (1,))
        assert outcome.removed_count == 1

    def test_threshold_monotonicity(self, rng):
        ds = _random_dataset(rng, n_trials=10)
        aps = score_sequence(ds)
        removed_sets = []
        for threshold in (0.2, 0.5, 0.8):
            outcome = filter_by_aps(ds, aps, FilterConfig(threshold))
            removed_sets.append(
                {
                    (t, i)
                    for t, idxs in enumerate(outcome.removed_index_list)
                    for i in idxs
                }
            )
        assert removed_sets[2] <= removed_sets[1] <= removed_sets[0]

    def test_threshold_one_is_identity(self, rng):
        ds = _random_dataset(rng)
        aps = score_sequence(ds)
        outcome = filter_by_aps(ds, aps, FilterConfig(threshold=1.0))
        assert outcome.removed_count == 0
        assert outcome.removed_fraction == 0.0
        assert outcome.emptied_trial_indices == ()
        assert outcome.kept.n_points == ds.n_points
        for got, want in zip(outcome.kept.trials, ds.trials):
            assert np.array_equal(got.feature_matrix(), want.feature_matrix())
            assert got.label == want.label

    def test_zero_scored_points_never_removed(self, rng):
        # Warm-up and repeated-label trials carry exact zeros, and zero can
        # never exceed a positive threshold.
        ds = make_dataset(
            [0, 1, 1, 0],
            [rng.normal(size=(4, 2)) for _ in range(4)],
        )
        aps = score_sequence(ds, ApsConfig(warmup_trials=2))
        for threshold in (0.01, 0.5, 1.0):
            outcome = filter_by_aps(ds, aps, FilterConfig(threshold))
            assert outcome.removed_index_list[0] == ()
            assert outcome.removed_index_list[1] == ()
            assert outcome.removed_index_list[2] == ()  # repeated label

    def test_all_points_of_a_trial_removed_leaves_placeholder(self):
        ds = make_dataset([0, 1, 0], [np.zeros((2, 2)), np.ones((2, 2)), np.zeros((2, 2))])
        scores = np.array([0.0, 0.0, 0.9, 0.95, 0.1, 0.0])
        outcome = filter_by_aps(ds, _synthetic_result(ds, scores), FilterConfig(0.7))
        assert outcome.emptied_trial_indices == (1,)
        placeholder = outcome.kept.trials[1]
        assert len(placeholder.points) == 0
        assert placeholder.label.id == 1
        assert placeholder.trial_index == 1
        # Later trials keep their position and labels.
        assert outcome.kept.trials[2].trial_index == 2
        assert len(outcome.kept.trials[2].points) == 2

    def test_emptied_trial_reported_as_validation_violation(self):
        ds = make_dataset([0, 1], [np.zeros((2, 2)), np.ones((2, 2))])
        scores = np.array([0.0, 0.0, 0.9, 0.95])
        outcome = filter_by_aps(ds, _synthetic_result(ds, scores), FilterConfig(0.7))
        report = validate_dataset(outcome.kept)
        assert any(v.code == "empty-trial" for v in report.violations)
        with pytest.raises(DatasetValidationError):
            require_valid(outcome.kept)

    def test_filtered_dataset_revalidates_when_no_trial_emptied(self, rng):
        for _ in range(5):
            ds = _random_dataset(rng)
            aps = score_sequence(ds)
            outcome = filter_by_aps(ds, aps, FilterConfig(0.7))
            if not outcome.emptied_trial_indices:
                require_valid(outcome.kept)

    def test_kept_points_renumbered_contiguously(self):
        ds = make_dataset([0, 1], [np.zeros((1, 2)), np.arange(10.0).reshape(5, 2)])
        scores = np.array([0.0, 0.1, 0.9, 0.2, 0.9, 0.3])
        outcome = filter_by_aps(ds, _synthetic_result(ds, scores), FilterConfig(0.7))
        survivors = outcome.kept.trials[1].points
        assert [p.index_in_trial for p in survivors] == [0, 1, 2]
        assert np.array_equal(
            outcome.kept.trials[1].feature_matrix(),
            np.array([[0.0, 1.0], [4.0, 5.0], [8.0, 9.0]]),
        )

    def test_metadata_preserved(self, rng):
        ds = _random_dataset(rng)
        aps = score_sequence(ds)
        outcome = filter_by_aps(ds, aps)
        assert outcome.kept.subject_id == ds.subject_id
        assert outcome.kept.session_id == ds.session_id
        assert outcome.kept.class_set == ds.class_set


class TestAlignment:
    def test_point_count_mismatch_raises(self, rng):
        ds = _random_dataset(rng)
        aps = score_sequence(ds)
        shorter = make_dataset(
            [t.label.id for t in ds.trials],
            [t.feature_matrix()[:-1] for t in ds.trials],
        )
        with pytest.raises(AlignmentError):
            filter_by_aps(shorter, aps)

    def test_trial_structure_mismatch_raises(self):
        ds_a = make_dataset([0, 1], [np.zeros((2, 2)), np.ones((4, 2))])
        ds_b = make_dataset([0, 1], [np.zeros((3, 2)), np.ones((3, 2))])
        aps_b = score_sequence(ds_b)
        with pytest.raises(AlignmentError):
            filter_by_aps(ds_a, aps_b)

    def test_alignment_error_is_value_error(self):
        assert issubclass(AlignmentError, ValueError)


class TestOutcomeShape:
    def test_outcome_fields(self, rng):
        ds = _random_dataset(rng)
        aps = score_sequence(ds)
        outcome = filter_by_aps(ds, aps)
        assert isinstance(outcome, FilterOutcome)
        assert len(outcome.removed_index_list) == ds.n_trials
        assert 0.0 <= outcome.removed_fraction <= 1.0
        assert outcome.removed_count == sum(
            len(idxs) for idxs in outcome.removed_index_list
        )

    def test_deterministic(self, rng):
        ds = _random_dataset(rng)
        aps = score_sequence(ds)
        first = filter_by_aps(ds, aps)
        second = filter_by_aps(ds, aps)
        assert first.removed_index_list == second.removed_index_list
        for a, b in zip(first.kept.trials, second.kept.trials):
            assert np.array_equal(a.feature_matrix(), b.feature_matrix())
