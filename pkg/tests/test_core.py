import numpy as np
import pytest

from primescore import (
    ClassLabel,
    DataPoint,
    DatasetValidationError,
    SequenceDataset,
    Trial,
    distinct_classes_in_sequence,
    require_valid,
    truncate_dataset,
    validate_dataset,
)

from conftest import labels_for, make_dataset


def codes(report):
    return sorted(v.code for v in report.violations)


class TestClassLabel:
    def test_equality_and_hash(self):
        assert ClassLabel(0, "H") == ClassLabel(0, "H")
        assert ClassLabel(0, "H") != ClassLabel(1, "H")
        assert len({ClassLabel(0, "H"), ClassLabel(0, "H")}) == 1

    def test_rejects_negative_id_and_empty_name(self):
        with pytest.raises(ValueError):
            ClassLabel(-1, "H")
        with pytest.raises(ValueError):
            ClassLabel(0, "")


class TestDataPoint:
    def test_copies_and_freezes_features(self):
        raw = np.array([1.0, 2.0])
        p = DataPoint(raw, 0)
        raw[0] = 99.0
        assert p.features[0] == 1.0
        with pytest.raises(ValueError):
            p.features[0] = 5.0

    def test_converts_to_float64(self):
        p = DataPoint([1, 2, 3], 0)
        assert p.features.dtype == np.float64
        assert p.dim == 3

    def test_rejects_non_vector(self):
        with pytest.raises(ValueError):
            DataPoint(np.zeros((2, 2)), 0)


class TestTrial:
    def test_feature_matrix_stacks_in_order(self):
        t = Trial(0, ClassLabel(0, "A"), (DataPoint([1.0, 0.0], 0), DataPoint([0.0, 1.0], 1)))
        assert t.feature_matrix().tolist() == [[1.0, 0.0], [0.0, 1.0]]
        assert len(t) == 2

    def test_empty_placeholder_allowed(self):
        t = Trial(3, ClassLabel(0, "A"), ())
        assert len(t) == 0
        assert t.feature_matrix().shape[0] == 0


class TestDatasetProperties:
    def test_counts_and_dim(self):
        ds = make_dataset([0, 1], [[[1.0, 2.0]], [[3.0, 4.0], [5.0, 6.0]]])
        assert ds.n_trials == 2
        assert ds.n_points == 3
        assert ds.dim == 2

    def test_class_set_sorted_by_id(self):
        a, b = ClassLabel(1, "B"), ClassLabel(0, "A")
        ds = SequenceDataset("s", "s", (Trial(0, b, (DataPoint([0.0, 0.0], 0),)),), (a, b))
        assert [c.id for c in ds.class_set] == [0, 1]
        assert ds.class_by_id(1).name == "B"
        with pytest.raises(KeyError):
            ds.class_by_id(7)

    def test_point_alignment_arrays(self):
        ds = make_dataset([1, 0], [[[1.0, 1.0], [2.0, 2.0]], [[3.0, 3.0]]])
        assert ds.point_trial_indices().tolist() == [0, 0, 1]
        assert ds.point_class_ids().tolist() == [1, 1, 0]


class TestValidation:
    def test_clean_dataset(self):
        ds = make_dataset([0, 1, 0], [[[1.0]], [[2.0]], [[3.0]]])
        report = validate_dataset(ds)
        assert report.ok
        assert report.violations == ()
        require_valid(ds)

    def test_single_trial_dataset_is_valid(self):
        ds = make_dataset([0], [[[1.0, 2.0], [3.0, 4.0]]])
        assert validate_dataset(ds).ok

    def test_duplicate_class_id(self):
        ds = SequenceDataset(
            "s", "s",
            (Trial(0, ClassLabel(0, "A"), (DataPoint([1.0], 0),)),),
            (ClassLabel(0, "A"), ClassLabel(0, "B")),
        )
        assert "duplicate-class-id" in codes(validate_dataset(ds))

    def test_duplicate_class_name(self):
        ds = SequenceDataset(
            "s", "s",
            (Trial(0, ClassLabel(0, "A"), (DataPoint([1.0], 0),)),),
            (ClassLabel(0, "A"), ClassLabel(1, "A")),
        )
        assert "duplicate-class-name" in codes(validate_dataset(ds))

    def test_non_dense_class_ids(self):
        ds = SequenceDataset(
            "s", "s",
            (Trial(0, ClassLabel(0, "A"), (DataPoint([1.0], 0),)),),
            (ClassLabel(0, "A"), ClassLabel(2, "C")),
        )
        assert "non-dense-class-ids" in codes(validate_dataset(ds))

    def test_non_contiguous_trial_index(self):
        labels = labels_for([0])
        ds = SequenceDataset(
            "s", "s",
            (
                Trial(0, labels[0], (DataPoint([1.0], 0),)),
                Trial(2, labels[0], (DataPoint([2.0], 0),)),
            ),
            tuple(labels),
        )
        report = validate_dataset(ds)
        assert "non-contiguous-trial-index" in codes(report)
        bad = [v for v in report.violations if v.code == "non-contiguous-trial-index"]
        assert bad[0].trial_index == 2

    def test_unknown_trial_label(self):
        ds = SequenceDataset(
            "s", "s",
            (Trial(0, ClassLabel(3, "D"), (DataPoint([1.0], 0),)),),
            (ClassLabel(0, "A"),),
        )
        assert "unknown-trial-label" in codes(validate_dataset(ds))

    def test_empty_trial_flagged(self):
        labels = labels_for([0])
        ds = SequenceDataset("s", "s", (Trial(0, labels[0], ()),), tuple(labels))
        assert "empty-trial" in codes(validate_dataset(ds))

    def test_non_contiguous_point_index(self):
        labels = labels_for([0])
        ds = SequenceDataset(
            "s", "s",
            (Trial(0, labels[0], (DataPoint([1.0], 0), DataPoint([2.0], 5))),),
            tuple(labels),
        )
        report = validate_dataset(ds)
        assert "non-contiguous-point-index" in codes(report)

    def test_dimension_mismatch(self):
        labels = labels_for([0])
        ds = SequenceDataset(
            "s", "s",
            (Trial(0, labels[0], (DataPoint([1.0, 2.0], 0), DataPoint([3.0], 1))),),
            tuple(labels),
        )
        assert "dimension-mismatch" in codes(validate_dataset(ds))

    def test_non_finite_feature(self):
        labels = labels_for([0])
        ds = SequenceDataset(
            "s", "s",
            (Trial(0, labels[0], (DataPoint([np.nan, 1.0], 0),)),),
            tuple(labels),
        )
        assert "non-finite-feature" in codes(validate_dataset(ds))

    def test_unused_class_is_warning_not_violation(self):
        ds = make_dataset([0], [[[1.0]]], class_ids=[0, 1])
        report = validate_dataset(ds)
        assert report.ok
        assert [w.code for w in report.warnings] == ["unused-class"]

    def test_require_valid_raises_with_report(self):
        labels = labels_for([0])
        ds = SequenceDataset("s", "s", (Trial(0, labels[0], ()),), tuple(labels))
        with pytest.raises(DatasetValidationError) as exc_info:
            require_valid(ds)
        assert exc_info.value.report.violations
        assert "empty-trial" in str(exc_info.value)

    def test_validation_idempotent(self):
        ds = make_dataset([0, 1], [[[1.0]], [[2.0]]])
        r1, r2 = validate_dataset(ds), validate_dataset(ds)
        assert codes(r1) == codes(r2)


class TestHelpers:
    def test_truncate_keeps_prefix_and_classes(self):
        ds = make_dataset([0, 1, 2], [[[1.0]], [[2.0]], [[3.0]]])
        head = truncate_dataset(ds, 2)
        assert head.n_trials == 2
        assert [t.label.id for t in head.trials] == [0, 1]
        assert head.class_set == ds.class_set

    def test_truncate_rejects_bad_counts(self):
        ds = make_dataset([0, 1], [[[1.0]], [[2.0]]])
        with pytest.raises(ValueError):
            truncate_dataset(ds, 0)
        with pytest.raises(ValueError):
            truncate_dataset(ds, 3)

    def test_distinct_classes_counts_sequence_not_catalog(self):
        ds = make_dataset([0, 0, 1], [[[1.0]], [[2.0]], [[3.0]]], class_ids=[0, 1, 2])
        assert distinct_classes_in_sequence(ds) == 2
