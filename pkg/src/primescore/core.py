"""Domain types for trial-structured sequential datasets.

A recording is an ordered sequence of trials; each trial is a contiguous
block of data points sharing one induced class label. All types are
immutable after construction and safe to share read-only across workers.

Data-level invariants (finite features, uniform dimension, dense class ids,
non-empty trials) are checked by :func:`validate_dataset` rather than at
construction time, so malformed data can still be loaded, inspected and
reported on.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator, Sequence

import numpy as np


class DatasetValidationError(ValueError):
    """Raised when an operation requires a well-formed dataset but got violations."""

    def __init__(self, report: "ValidationReport"):
        self.report = report
        lines = "; ".join(f"[{v.code}] {v.message}" for v in report.violations)
        super().__init__(f"dataset failed validation: {lines}")


@dataclass(frozen=True)
class ClassLabel:
    """One induced class: dense non-negative id plus a short display name."""

    id: int
    name: str

    def __post_init__(self):
        if self.id < 0:
            raise ValueError(f"class id must be non-negative, got {self.id}")
        if not self.name:
            raise ValueError("class name must be non-empty")


@dataclass(frozen=True, eq=False)
class DataPoint:
    """A single feature vector inside a trial."""

    features: np.ndarray
    index_in_trial: int

    def __post_init__(self):
        arr = np.array(self.features, dtype=np.float64, copy=True)
        if arr.ndim != 1:
            raise ValueError(f"features must be a 1-D vector, got shape {arr.shape}")
        arr.flags.writeable = False
        object.__setattr__(self, "features", arr)
        if self.index_in_trial < 0:
            raise ValueError("index_in_trial must be non-negative")

    @property
    def dim(self) -> int:
        return int(self.features.shape[0])


@dataclass(frozen=True, eq=False)
class Trial:
    """Contiguous block of data points sharing one induced label.

    Trials are normally non-empty. Zero-point trials exist only as structural
    placeholders left behind by filtering (so that trial adjacency is
    preserved) and are flagged by validation.
    """

    trial_index: int
    label: ClassLabel
    points: tuple[DataPoint, ...]

    def __post_init__(self):
        object.__setattr__(self, "points", tuple(self.points))
        if self.trial_index < 0:
            raise ValueError("trial_index must be non-negative")

    def __len__(self) -> int:
        return len(self.points)

    def feature_matrix(self) -> np.ndarray:
        """Stack point features into an (n_points, dim) array."""
        if not self.points:
            return np.empty((0, 0))
        return np.stack([p.features for p in self.points])


@dataclass(frozen=True, eq=False)
class SequenceDataset:
    """Ordered trials of labeled feature vectors for one subject-session recording."""

    subject_id: str
    session_id: str
    trials: tuple[Trial, ...]
    class_set: tuple[ClassLabel, ...]

    def __post_init__(self):
        object.__setattr__(self, "trials", tuple(self.trials))
        ordered = tuple(sorted(self.class_set, key=lambda c: c.id))
        object.__setattr__(self, "class_set", ordered)

    @property
    def n_trials(self) -> int:
        return len(self.trials)

    @property
    def n_points(self) -> int:
        return sum(len(t) for t in self.trials)

    @property
    def dim(self) -> int | None:
        """Feature dimension, taken from the first non-empty trial."""
        for t in self.trials:
            if t.points:
                return t.points[0].dim
        return None

    def class_by_id(self, class_id: int) -> ClassLabel:
        for c in self.class_set:
            if c.id == class_id:
                return c
        raise KeyError(f"class id {class_id} not in class set")

    def iter_points(self) -> Iterator[tuple[Trial, DataPoint]]:
        """Yield (trial, point) pairs in dataset order."""
        for trial in self.trials:
            for point in trial.points:
                yield trial, point

    def point_trial_indices(self) -> np.ndarray:
        """Per-point trial index, in dataset order."""
        return np.array([t.trial_index for t, _ in self.iter_points()], dtype=np.int64)

    def point_class_ids(self) -> np.ndarray:
        """Per-point class id, in dataset order."""
        return np.array([t.label.id for t, _ in self.iter_points()], dtype=np.int64)


@dataclass(frozen=True)
class Violation:
    """One problem found by validation, located if possible."""

    code: str
    message: str
    trial_index: int | None = None
    point_index: int | None = None


@dataclass(frozen=True)
class ValidationReport:
    violations: tuple[Violation, ...]
    warnings: tuple[Violation, ...] = ()

    @property
    def ok(self) -> bool:
        return not self.violations


def validate_dataset(ds: SequenceDataset) -> ValidationReport:
    """Check a dataset against the structural invariants and report violations.

    Side-effect free and idempotent. Returns an empty violation list iff the
    dataset is well-formed. Unused classes in the class set are reported as
    warnings, not violations.
    """
    violations: list[Violation] = []
    warnings: list[Violation] = []

    ids = [c.id for c in ds.class_set]
    names = [c.name for c in ds.class_set]
    if len(set(ids)) != len(ids):
        violations.append(Violation("duplicate-class-id", "class ids are not unique"))
    if len(set(names)) != len(names):
        violations.append(Violation("duplicate-class-name", "class names are not unique"))
    if sorted(set(ids)) != list(range(len(set(ids)))):
        violations.append(
            Violation(
                "non-dense-class-ids",
                f"class ids must be dense 0..K-1, got {sorted(set(ids))}",
            )
        )
    known_ids = set(ids)

    used_ids = {t.label.id for t in ds.trials}
    for c in ds.class_set:
        if c.id not in used_ids:
            warnings.append(
                Violation("unused-class", f"class {c.id} ({c.name!r}) appears in no trial")
            )

    ref_dim = ds.dim
    for pos, trial in enumerate(ds.trials):
        if trial.trial_index != pos:
            violations.append(
                Violation(
                    "non-contiguous-trial-index",
                    f"trial at position {pos} has trial_index {trial.trial_index}",
                    trial_index=trial.trial_index,
                )
            )
        if trial.label.id not in known_ids:
            violations.append(
                Violation(
                    "unknown-trial-label",
                    f"trial {trial.trial_index} labeled with class id "
                    f"{trial.label.id} not in class set",
                    trial_index=trial.trial_index,
                )
            )
        if not trial.points:
            violations.append(
                Violation(
                    "empty-trial",
                    f"trial {trial.trial_index} has no data points",
                    trial_index=trial.trial_index,
                )
            )
        for k, point in enumerate(trial.points):
            if point.index_in_trial != k:
                violations.append(
                    Violation(
                        "non-contiguous-point-index",
                        f"trial {trial.trial_index}: point at position {k} has "
                        f"index_in_trial {point.index_in_trial}",
                        trial_index=trial.trial_index,
                        point_index=k,
                    )
                )
            if ref_dim is not None and point.dim != ref_dim:
                violations.append(
                    Violation(
                        "dimension-mismatch",
                        f"trial {trial.trial_index} point {k}: dimension "
                        f"{point.dim} != {ref_dim}",
                        trial_index=trial.trial_index,
                        point_index=k,
                    )
                )
            if not np.all(np.isfinite(point.features)):
                violations.append(
                    Violation(
                        "non-finite-feature",
                        f"trial {trial.trial_index} point {k}: non-finite feature value",
                        trial_index=trial.trial_index,
                        point_index=k,
                    )
                )

    return ValidationReport(tuple(violations), tuple(warnings))


def require_valid(ds: SequenceDataset) -> None:
    """Raise :class:`DatasetValidationError` unless the dataset validates cleanly."""
    report = validate_dataset(ds)
    if not report.ok:
        raise DatasetValidationError(report)


def distinct_classes_in_sequence(ds: SequenceDataset) -> int:
    """Number of distinct class labels actually appearing among the trials."""
    return len({t.label.id for t in ds.trials})


def truncate_dataset(ds: SequenceDataset, n_trials: int) -> SequenceDataset:
    """Dataset containing only the first ``n_trials`` trials, structure preserved."""
    if not 0 < n_trials <= ds.n_trials:
        raise ValueError(f"n_trials must be in 1..{ds.n_trials}, got {n_trials}")
    return SequenceDataset(
        subject_id=ds.subject_id,
        session_id=ds.session_id,
        trials=ds.trials[:n_trials],
        class_set=ds.class_set,
    )


def build_dataset(
    subject_id: str,
    session_id: str,
    labels: Sequence[ClassLabel],
    trial_features: Sequence[Sequence[Sequence[float]]],
    class_set: Sequence[ClassLabel] | None = None,
) -> SequenceDataset:
    """Assemble a dataset from per-trial labels and raw per-trial feature lists."""
    if len(labels) != len(trial_features):
        raise ValueError("labels and trial_features must have the same length")
    trials = []
    for i, (label, rows) in enumerate(zip(labels, trial_features)):
        points = tuple(DataPoint(np.asarray(row), k) for k, row in enumerate(rows))
        trials.append(Trial(i, label, points))
    if class_set is None:
        seen: dict[int, ClassLabel] = {}
        for label in labels:
            seen.setdefault(label.id, label)
        class_set = tuple(seen.values())
    return SequenceDataset(subject_id, session_id, tuple(trials), tuple(class_set))
