"""Synthetic trial sequences with controllable priming contamination.

The generator operationalizes the lingering-response story as a mean-shift
mixture: point m (0-based) of a trial whose label c differs from its
predecessor's label c' is drawn from

    Normal((1 - w_m) * center(c) + w_m * center(c'), sigma^2 * I),
    w_m = contamination * decay**m

so the pull toward the previous class fades exponentially within the trial.
The first trial and any trial repeating its predecessor's label use w = 0.
Every point's actual weight is emitted as ground truth, with a boolean
"primed" flag for the strongly pulled portion (w > 0.5 * contamination).

Default class centers are sampled with pairwise distance >= 4 sigma so the
uncontaminated classes stay well separated.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .core import ClassLabel, DataPoint, SequenceDataset, Trial

_CENTER_SEPARATION_SIGMAS = 4.0
_MAX_CENTER_DRAWS = 10_000

# 15-trial happy/sad/neutral stimulus order used by the three-emotion
# benchmark sessions; all three classes appear in the first three trials and
# one back-to-back repeat occurs at trials 9-10.
SEED_LIKE_LABEL_NAMES = ("H", "S", "N", "S", "N", "H", "S", "N", "H", "H", "S", "N", "S", "N", "H")

PRESETS = ("seed-like", "random")


@dataclass(frozen=True, eq=False)
class SynthConfig:
    """Generator parameters; deterministic output for a given seed."""

    n_classes: int
    dim: int
    trial_labels: tuple[int, ...]
    points_per_trial: int | tuple[int, ...] = 40
    class_names: tuple[str, ...] | None = None
    class_centers: np.ndarray | None = None
    noise_sigma: float = 0.5
    contamination: float = 0.8
    decay: float = 0.9
    seed: int = 0

    def __post_init__(self):
        object.__setattr__(self, "trial_labels", tuple(int(x) for x in self.trial_labels))
        if isinstance(self.points_per_trial, (list, tuple, np.ndarray)):
            object.__setattr__(
                self, "points_per_trial", tuple(int(x) for x in self.points_per_trial)
            )
        if self.n_classes < 2:
            raise ValueError("n_classes must be >= 2")
        if self.dim < 2:
            raise ValueError("dim must be >= 2")
        if not self.trial_labels:
            raise ValueError("trial_labels must be non-empty")
        if any(not 0 <= c < self.n_classes for c in self.trial_labels):
            raise ValueError("trial_labels must be class ids in 0..n_classes-1")
        for m in self.points_per_trial_list():
            if m < 1:
                raise ValueError("points_per_trial entries must be >= 1")
        if self.class_names is not None:
            if len(self.class_names) != self.n_classes:
                raise ValueError("class_names must have one entry per class")
            if len(set(self.class_names)) != self.n_classes:
                raise ValueError("class_names must be unique")
        if self.class_centers is not None:
            centers = np.asarray(self.class_centers, dtype=np.float64)
            if centers.shape != (self.n_classes, self.dim):
                raise ValueError(
                    f"class_centers must have shape ({self.n_classes}, {self.dim}), "
                    f"got {centers.shape}"
                )
            centers = centers.copy()
            centers.flags.writeable = False
            object.__setattr__(self, "class_centers", centers)
        if not self.noise_sigma > 0:
            raise ValueError("noise_sigma must be positive")
        if not 0.0 <= self.contamination <= 1.0:
            raise ValueError("contamination must be in [0, 1]")
        if not 0.0 < self.decay <= 1.0:
            raise ValueError("decay must be in (0, 1]")

    def points_per_trial_list(self) -> tuple[int, ...]:
        if isinstance(self.points_per_trial, tuple):
            if len(self.points_per_trial) != len(self.trial_labels):
                raise ValueError("points_per_trial list must match trial_labels length")
            return self.points_per_trial
        return tuple(int(self.points_per_trial) for _ in self.trial_labels)


@dataclass(frozen=True, eq=False)
class SynthGroundTruth:
    """Per-point contamination weights actually used, aligned to dataset order."""

    weights: np.ndarray
    primed: np.ndarray
    trial_indices: np.ndarray
    class_ids: np.ndarray

    def __post_init__(self):
        for name, dtype in (
            ("weights", np.float64),
            ("primed", bool),
            ("trial_indices", np.int64),
            ("class_ids", np.int64),
        ):
            arr = np.asarray(getattr(self, name), dtype=dtype).copy()
            arr.flags.writeable = False
            object.__setattr__(self, name, arr)


def _sample_centers(rng: np.random.Generator, n_classes: int, dim: int, min_dist: float) -> np.ndarray:
    half_box = min_dist * n_classes
    centers: list[np.ndarray] = []
    attempts = 0
    while len(centers) < n_classes:
        candidate = rng.uniform(-half_box, half_box, size=dim)
        attempts += 1
        if attempts > _MAX_CENTER_DRAWS:
            raise RuntimeError("could not place class centers with the required separation")
        if all(np.linalg.norm(candidate - c) >= min_dist for c in centers):
            centers.append(candidate)
    return np.stack(centers)


def generate(cfg: SynthConfig) -> tuple[SequenceDataset, SynthGroundTruth]:
    """Generate one contaminated sequence plus its per-point ground truth."""
    rng = np.random.default_rng(cfg.seed)
    if cfg.class_centers is not None:
        centers = np.asarray(cfg.class_centers, dtype=np.float64)
    else:
        centers = _sample_centers(
            rng, cfg.n_classes, cfg.dim, _CENTER_SEPARATION_SIGMAS * cfg.noise_sigma
        )
    names = cfg.class_names or tuple(f"c{k}" for k in range(cfg.n_classes))
    class_set = tuple(ClassLabel(k, names[k]) for k in range(cfg.n_classes))

    trials: list[Trial] = []
    weights: list[float] = []
    trial_idx_col: list[int] = []
    class_id_col: list[int] = []
    counts = cfg.points_per_trial_list()
    for i, label_id in enumerate(cfg.trial_labels):
        prev_id = cfg.trial_labels[i - 1] if i > 0 else None
        contaminated = prev_id is not None and prev_id != label_id
        points = []
        for m in range(counts[i]):
            w = cfg.contamination * cfg.decay**m if contaminated else 0.0
            mu = (1.0 - w) * centers[label_id]
            if contaminated:
                mu = mu + w * centers[prev_id]
            points.append(DataPoint(rng.normal(mu, cfg.noise_sigma), m))
            weights.append(w)
            trial_idx_col.append(i)
            class_id_col.append(label_id)
        trials.append(Trial(i, class_set[label_id], tuple(points)))

    w_arr = np.array(weights)
    gt = SynthGroundTruth(
        weights=w_arr,
        primed=w_arr > 0.5 * cfg.contamination,
        trial_indices=np.array(trial_idx_col),
        class_ids=np.array(class_id_col),
    )
    ds = SequenceDataset(
        subject_id="synthetic",
        session_id=f"seed{cfg.seed}",
        trials=tuple(trials),
        class_set=class_set,
    )
    return ds, gt


def seed_like_config(
    seed: int = 0,
    points_per_trial: int = 40,
    dim: int = 4,
    noise_sigma: float = 0.5,
    contamination: float = 0.8,
    decay: float = 0.9,
) -> SynthConfig:
    """Three-class, 15-trial sequence following the benchmark stimulus order."""
    name_to_id = {"H": 0, "S": 1, "N": 2}
    return SynthConfig(
        n_classes=3,
        dim=dim,
        trial_labels=tuple(name_to_id[n] for n in SEED_LIKE_LABEL_NAMES),
        points_per_trial=points_per_trial,
        class_names=("H", "S", "N"),
        noise_sigma=noise_sigma,
        contamination=contamination,
        decay=decay,
        seed=seed,
    )


def random_order_config(
    n_classes: int = 4,
    n_trials: int = 12,
    seed: int = 0,
    points_per_trial: int = 40,
    dim: int = 4,
    noise_sigma: float = 0.5,
    contamination: float = 0.8,
    decay: float = 0.9,
) -> SynthConfig:
    """Random stimulus order whose first ``n_classes`` trials cover every class.

    The covering prefix mirrors real collection protocols and guarantees that
    once the warm-up ends every class already has history to build centroids
    from. The label stream is seeded independently of the data stream.
    """
    if n_trials < n_classes:
        raise ValueError("n_trials must be >= n_classes to cover every class")
    label_rng = np.random.default_rng([seed, 1])
    prefix = label_rng.permutation(n_classes)
    tail = label_rng.integers(0, n_classes, size=n_trials - n_classes)
    return SynthConfig(
        n_classes=n_classes,
        dim=dim,
        trial_labels=tuple(int(x) for x in np.concatenate([prefix, tail])),
        points_per_trial=points_per_trial,
        noise_sigma=noise_sigma,
        contamination=contamination,
        decay=decay,
        seed=seed,
    )


def preset_config(name: str, seed: int = 0, **overrides) -> SynthConfig:
    """Build a preset generator config by name ("seed-like" or "random")."""
    if name == "seed-like":
        return seed_like_config(seed=seed, **overrides)
    if name == "random":
        return random_order_config(seed=seed, **overrides)
    raise ValueError(f"unknown preset {name!r}; expected one of {PRESETS}")
