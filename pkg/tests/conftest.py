import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))

from primescore import ClassLabel, build_dataset


def labels_for(ids):
    names = "ABCDEFGH"
    return [ClassLabel(i, names[i]) for i in ids]


def make_dataset(label_ids, trial_features, subject="subj", session="sess", class_ids=None):
    """Build a dataset from per-trial label ids and feature row lists."""
    if class_ids is None:
        class_ids = sorted(set(label_ids))
    catalog = {c.id: c for c in labels_for(class_ids)}
    return build_dataset(
        subject,
        session,
        [catalog[i] for i in label_ids],
        trial_features,
        class_set=tuple(catalog[i] for i in sorted(catalog)),
    )


def random_sequence(rng, n_classes=None, n_trials=None, dim=None, max_points=30):
    """A random label order plus feature rows, for oracle comparisons.

    The label order is unconstrained (repeats allowed), features are uniform
    in [-2, 2] so the no-shift oracle softmax cannot underflow.
    """
    n_classes = n_classes or int(rng.integers(2, 6))
    n_trials = n_trials or int(rng.integers(5, 13))
    dim = dim or int(rng.choice([2, 4, 8]))
    label_ids = [int(rng.integers(0, n_classes)) for _ in range(n_trials)]
    while len(set(label_ids)) < 2:
        label_ids[-1] = (label_ids[-1] + 1) % n_classes
    dense = {lid: k for k, lid in enumerate(sorted(set(label_ids)))}
    label_ids = [dense[lid] for lid in label_ids]
    trial_features = [
        rng.uniform(-2.0, 2.0, size=(int(rng.integers(5, max_points + 1)), dim)).tolist()
        for _ in range(n_trials)
    ]
    return label_ids, trial_features


@pytest.fixture
def rng():
    return np.random.default_rng(12345)
