"""Deterministic baseline classifiers for desk-scale experiments.

Two point-wise models stand in for heavier sequence architectures when the
question is "which training points does the model see", not model capacity:

* ``nearest_centroid`` -- per-class mean vectors, predict by smallest
  Euclidean distance.
* ``softmax_regression`` -- multinomial logistic regression with an L2
  penalty, trained by full-batch gradient descent from a seeded small-random
  init. Full-batch keeps training bit-reproducible for a given (data, config).

Ties in prediction break toward the lowest class id. Training loss is
monitored every epoch; if a step ever increases the loss beyond 1e-9 the
learning rate is halved and training restarts, with the adjustment recorded
on the returned model.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .core import ClassLabel, DataPoint, Trial

MODEL_KINDS = ("nearest_centroid", "softmax_regression")

_MONOTONE_SLACK = 1e-9
_MAX_LR_HALVINGS = 20


@dataclass(frozen=True)
class TrainConfig:
    model_kind: str = "softmax_regression"
    learning_rate: float = 0.1
    weight_decay: float = 1e-5
    epochs: int = 1000
    seed: int = 0

    def __post_init__(self):
        if self.model_kind not in MODEL_KINDS:
            raise ValueError(f"model_kind must be one of {MODEL_KINDS}, got {self.model_kind!r}")
        if self.learning_rate <= 0:
            raise ValueError("learning_rate must be positive")
        if self.weight_decay < 0:
            raise ValueError("weight_decay must be non-negative")
        if self.epochs < 1:
            raise ValueError("epochs must be >= 1")


@dataclass(frozen=True, eq=False)
class TrainedModel:
    """Fitted parameters plus the class set they index.

    ``parameters`` is (K, D) centroids for nearest_centroid and (K, D+1)
    weights with a trailing bias column for softmax_regression, rows ordered
    by class id. ``learning_rate_used``/``lr_halvings`` record any internal
    step-size adjustment made to keep the loss monotone.
    """

    model_kind: str
    parameters: np.ndarray
    class_set: tuple[ClassLabel, ...]
    seed: int = 0
    learning_rate_used: float | None = None
    lr_halvings: int = 0
    final_loss: float | None = None

    @property
    def dim(self) -> int:
        d = self.parameters.shape[1]
        return d - 1 if self.model_kind == "softmax_regression" else d


def _pool_training_points(train_trials: Sequence[Trial]) -> tuple[np.ndarray, np.ndarray, tuple[ClassLabel, ...]]:
    features = []
    label_ids = []
    classes: dict[int, ClassLabel] = {}
    for trial in train_trials:
        for point in trial.points:
            features.append(point.features)
            label_ids.append(trial.label.id)
        if trial.points:
            classes[trial.label.id] = trial.label
    if not features:
        raise ValueError("empty training set")
    class_set = tuple(sorted(classes.values(), key=lambda c: c.id))
    if len(class_set) < 2:
        raise ValueError("training set contains a single class; need at least two")
    id_to_col = {c.id: k for k, c in enumerate(class_set)}
    X = np.stack(features)
    y = np.array([id_to_col[i] for i in label_ids], dtype=np.int64)
    return X, y, class_set


def softmax_loss_and_grad(
    W: np.ndarray,
    X_aug: np.ndarray,
    y: np.ndarray,
    weight_decay: float,
) -> tuple[float, np.ndarray]:
    """Cross-entropy plus L2 penalty on the non-bias weights, with its gradient.

    W is (K, D+1) with the bias in the last column; X_aug is (m, D+1) with a
    trailing ones column; y holds class column indices.
    """
    m = X_aug.shape[0]
    logits = X_aug @ W.T
    shifted = logits - logits.max(axis=1, keepdims=True)
    log_norm = np.log(np.exp(shifted).sum(axis=1, keepdims=True))
    log_probs = shifted - log_norm
    ce = -float(np.mean(log_probs[np.arange(m), y]))
    penalty = weight_decay * float(np.sum(W[:, :-1] ** 2))

    probs = np.exp(log_probs)
    onehot = np.zeros_like(probs)
    onehot[np.arange(m), y] = 1.0
    grad = (probs - onehot).T @ X_aug / m
    grad[:, :-1] += 2.0 * weight_decay * W[:, :-1]
    return ce + penalty, grad


def _train_softmax(X: np.ndarray, y: np.ndarray, n_classes: int, cfg: TrainConfig) -> tuple[np.ndarray, float, int, float]:
    m, d = X.shape
    X_aug = np.hstack([X, np.ones((m, 1))])
    lr = cfg.learning_rate
    halvings = 0
    while True:
        rng = np.random.default_rng(cfg.seed)
        W = rng.uniform(-0.01, 0.01, size=(n_classes, d + 1))
        loss, grad = softmax_loss_and_grad(W, X_aug, y, cfg.weight_decay)
        monotone = True
        for _ in range(cfg.epochs):
            W_next = W - lr * grad
            loss_next, grad_next = softmax_loss_and_grad(W_next, X_aug, y, cfg.weight_decay)
            if loss_next > loss + _MONOTONE_SLACK:
                monotone = False
                break
            W, loss, grad = W_next, loss_next, grad_next
        if monotone:
            return W, lr, halvings, loss
        halvings += 1
        lr /= 2.0
        if halvings > _MAX_LR_HALVINGS:
            raise RuntimeError("training loss failed to decrease even after 20 step halvings")


def train(train_trials: Sequence[Trial], cfg: TrainConfig = TrainConfig()) -> TrainedModel:
    """Fit a model on the pooled points of the given trials.

    Deterministic: identical (data, config) yields bit-identical parameters.
    Raises ValueError on an empty or single-class training set.
    """
    X, y, class_set = _pool_training_points(train_trials)
    k = len(class_set)

    if cfg.model_kind == "nearest_centroid":
        centroids = np.stack([X[y == col].mean(axis=0) for col in range(k)])
        return TrainedModel("nearest_centroid", centroids, class_set, seed=cfg.seed)

    W, lr_used, halvings, final_loss = _train_softmax(X, y, k, cfg)
    return TrainedModel(
        "softmax_regression",
        W,
        class_set,
        seed=cfg.seed,
        learning_rate_used=lr_used,
        lr_halvings=halvings,
        final_loss=final_loss,
    )


def class_scores(model: TrainedModel, X: np.ndarray) -> np.ndarray:
    """Per-class decision scores for a feature matrix (higher wins)."""
    if X.ndim != 2 or X.shape[1] != model.dim:
        raise ValueError(
            f"points have dimension {X.shape[1] if X.ndim == 2 else '?'}, "
            f"model expects {model.dim}"
        )
    if model.model_kind == "nearest_centroid":
        dists = np.linalg.norm(X[:, None, :] - model.parameters[None, :, :], axis=2)
        return -dists
    X_aug = np.hstack([X, np.ones((X.shape[0], 1))])
    return X_aug @ model.parameters.T


def predict(model: TrainedModel, points: Sequence[DataPoint]) -> list[ClassLabel]:
    """Argmax prediction for each point; ties break to the lowest class id."""
    if not points:
        return []
    X = np.stack([p.features for p in points])
    scores = class_scores(model, X)
    cols = np.argmax(scores, axis=1)
    return [model.class_set[c] for c in cols]
