"""External clustering indices: accuracy, Rand index, normalized mutual info.

All three treat label values as opaque categories, so they are invariant to
relabeling either argument.
"""

from dataclasses import dataclass

import numpy as np
from scipy.optimize import linear_sum_assignment

__all__ = ["EvaluationReport", "accuracy", "rand_index", "nmi", "evaluate_labels"]


@dataclass(frozen=True)
class EvaluationReport:
    ac: float
    ri: float
    nmi: float
    matching: dict


def _as_labels(values, name):
    arr = np.asarray(values)
    if arr.ndim != 1 or arr.size == 0:
        raise ValueError(f"{name} must be a nonempty 1-d label vector")
    return arr

def _check_pair(pred, truth):
    pred = _as_labels(pred, "pred")
    truth = _as_labels(truth, "truth")
    if pred.shape != truth.shape:
        raise ValueError(
            f"label vectors differ in length: {pred.size} vs {truth.size}"
        )
    return pred, truth


def _contingency(pred, truth):
    pred_values, pred_idx = np.unique(pred, return_inverse=True)
    truth_values, truth_idx = np.unique(truth, return_inverse=True)
    table = np.zeros((pred_values.size, truth_values.size), dtype=np.int64)
    np.add.at(table, (pred_idx, truth_idx), 1)
    return pred_values, truth_values, table


def accuracy(pred, truth):
    """Best-matching accuracy: (value, matching).

    Searches the injective assignment of predicted clusters to true classes
    that maximizes agreement (padding the smaller side with empty clusters),
    then counts matched objects. ``matching`` maps each predicted label to
    the true label it was assigned to, for the real (non-padding) pairs.
    """
    pred, truth = _check_pair(pred, truth)
    pred_values, truth_values, table = _contingency(pred, truth)
    size = max(pred_values.size, truth_values.size)
    padded = np.zeros((size, size), dtype=np.int64)
    padded[: table.shape[0], : table.shape[1]] = table
    rows, cols = linear_sum_assignment(padded, maximize=True)
    matched = int(padded[rows, cols].sum())
    matching = {
        pred_values[i].item(): truth_values[j].item()
        for i, j in zip(rows, cols)
        if i < pred_values.size and j < truth_values.size
    }
    return matched / pred.size, matching


def rand_index(pred, truth) -> float:
    """Fraction of object pairs on which the two partitions agree."""
    pred, truth = _check_pair(pred, truth)
    n = pred.size
    if n < 2:
        raise ValueError("rand_index needs at least two objects")
    _, _, table = _contingency(pred, truth)

    def pairs(counts):
        counts = counts.astype(np.int64)
        return int((counts * (counts - 1) // 2).sum())

    together = pairs(table.ravel())  # same cluster and same class
    same_pred = pairs(table.sum(axis=1))
    same_truth = pairs(table.sum(axis=0))
    total = n * (n - 1) // 2
    apart = total - same_pred - same_truth + together
    return (together + apart) / total


def nmi(pred, truth) -> float:
    """Mutual information normalized by the mean of the two entropies.

    Natural logarithms; 2*I(X;Y) / (H(X) + H(Y)). When both partitions are
    single-cluster (both entropies zero) the partitions are identical and the
    value is defined as 1.
    """
    pred, truth = _check_pair(pred, truth)
    n = pred.size
    _, _, table = _contingency(pred, truth)
    joint = table / n
    p_pred = joint.sum(axis=1)
    p_truth = joint.sum(axis=0)

    def entropy(p):
        p = p[p > 0]
        return float(-(p * np.log(p)).sum())

    h_sum = entropy(p_pred) + entropy(p_truth)
    if h_sum == 0.0:
        return 1.0
    nz = joint > 0
    outer = np.outer(p_pred, p_truth)
    info = float((joint[nz] * np.log(joint[nz] / outer[nz])).sum())
    return float(np.clip(2.0 * info / h_sum, 0.0, 1.0))


def evaluate_labels(pred, truth) -> EvaluationReport:
    """All three indices plus the accuracy matching, in one report."""
    ac, matching = accuracy(pred, truth)
    return EvaluationReport(
        ac=ac, ri=rand_index(pred, truth), nmi=nmi(pred, truth), matching=matching
    )
