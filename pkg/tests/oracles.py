"""Independent from-scratch recomputations used to cross-check the package.

Everything here is pure Python (lists, dicts, math) with none of the
package's vectorization or numerical-stability tricks, so agreement rules
out shared bugs in the main implementation.
"""

from __future__ import annotations

import math


def euclidean(a, b) -> float:
    return math.sqrt(sum((x - y) ** 2 for x, y in zip(a, b)))


def vector_mean(rows) -> list[float]:
    n = len(rows)
    return [sum(r[j] for r in rows) / n for j in range(len(rows[0]))]


def grouped_centroids(history, current_id: int, prev_id: int):
    """history: list of (label_id, feature_list) pairs from strictly earlier
    trials. Returns (g_class, g_prev, g_other), each None when its group has
    no points."""
    groups = {"class": [], "prev": [], "other": []}
    for label_id, feats in history:
        if label_id == current_id:
            groups["class"].append(feats)
        elif label_id == prev_id:
            groups["prev"].append(feats)
        else:
            groups["other"].append(feats)
    return tuple(
        vector_mean(groups[k]) if groups[k] else None
        for k in ("class", "prev", "other")
    )


def direct_softmax_score(d_class, d_prev, d_other, tau) -> float:
    """Plain three-term (or two-term) softmax with no stability shift."""
    terms = [math.exp(-d_class / tau), math.exp(-d_prev / tau)]
    if d_other is not None:
        terms.append(math.exp(-d_other / tau))
    return terms[1] / math.fsum(terms)


def score_sequence_oracle(trials, tau, warmup):
    """trials: list of (label_id, list_of_feature_lists). Returns the flat
    per-point score list in dataset order, applying the zero-score rules."""
    scores = []
    for i, (label_id, points) in enumerate(trials):
        zero = i < warmup or i == 0 or label_id == trials[i - 1][0]
        if zero:
            scores.extend(0.0 for _ in points)
            continue
        prev_id = trials[i - 1][0]
        history = [
            (lid, feats)
            for lid, pts in trials[:i]
            for feats in pts
        ]
        g_class, g_prev, g_other = grouped_centroids(history, label_id, prev_id)
        if g_class is None or g_prev is None:
            scores.extend(0.0 for _ in points)
            continue
        for x in points:
            d_class = euclidean(x, g_class)
            d_prev = euclidean(x, g_prev)
            d_other = euclidean(x, g_other) if g_other is not None else None
            scores.append(direct_softmax_score(d_class, d_prev, d_other, tau))
    return scores


def priming_error_oracle(rows):
    """rows: list of (true_id, prev_id, predicted_id). Returns (pe, accuracy)."""
    n = len(rows)
    deltas = sum(1 for t, p, y in rows if y == p and p != t)
    correct = sum(1 for t, p, y in rows if y == t)
    return deltas / n, correct / n


def predict_oracle(score_rows):
    """Argmax with lowest-index tie break, one row of class scores per point."""
    out = []
    for row in score_rows:
        best = 0
        for j in range(1, len(row)):
            if row[j] > row[best]:
                best = j
        out.append(best)
    return out


def elementwise_mean(rows):
    n = len(rows)
    return [math.fsum(r[j] for r in rows) / n for j in range(len(rows[0]))]


def central_difference_gradient(loss_fn, W, eps=1e-6):
    """Numerical gradient of a scalar loss over a 2-D parameter list."""
    rows, cols = len(W), len(W[0])
    grad = [[0.0] * cols for _ in range(rows)]
    for r in range(rows):
        for c in range(cols):
            orig = W[r][c]
            W[r][c] = orig + eps
            hi = loss_fn(W)
            W[r][c] = orig - eps
            lo = loss_fn(W)
            W[r][c] = orig
            grad[r][c] = (hi - lo) / (2 * eps)
    return grad
