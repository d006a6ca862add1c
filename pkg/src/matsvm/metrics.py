"""Multilabel evaluation measures.

Labels are +-1 matrices with one row per sample and one column per label;
+1 marks a positive. Conventions:

* ExactMatch is subset accuracy: the fraction of rows predicted entirely right.
* HammingLoss is the fraction of wrong label slots.
* Per-label and pooled F1 use ``2TP / (2TP + FP + FN)`` with 0/0 taken as 0.
* AvgPrecision is label-ranking average precision computed from real-valued
  scores. Ties rank the lower label index first, and rows with no positive
  label are skipped.
"""

from dataclasses import asdict, dataclass
from fractions import Fraction

import numpy as np

from .exceptions import DimensionError
from .matrix import as_matrix

METRIC_NAMES = ("exact_match", "hamming_loss", "macro_f1", "micro_f1", "avg_precision")


@dataclass(frozen=True)
class MetricReport:
    exact_match: float
    hamming_loss: float
    macro_f1: float
    micro_f1: float
    avg_precision: float

    def as_dict(self):
        return asdict(self)


def _pair(y_true, y_pred):
    y_true = as_matrix(y_true, "y_true")
    y_pred = as_matrix(y_pred, "y_pred")
    if y_true.shape != y_pred.shape:
        raise DimensionError(f"y_true {y_true.shape} and y_pred {y_pred.shape} differ")
    return y_true > 0, y_pred > 0


def _f1(tp, fp, fn):
    denom = 2 * tp + fp + fn
    return np.where(denom > 0, 2 * tp / np.maximum(denom, 1), 0.0)


def exact_match(y_true, y_pred):
    t, p = _pair(y_true, y_pred)
    return float(np.mean((t == p).all(axis=1)))


def hamming_loss(y_true, y_pred):
    t, p = _pair(y_true, y_pred)
    return float(np.mean(t != p))


def macro_f1(y_true, y_pred):
    t, p = _pair(y_true, y_pred)
    tp = np.sum(t & p, axis=0)
    fp = np.sum(~t & p, axis=0)
    fn = np.sum(t & ~p, axis=0)
    # Per-label F1 values are ratios of integers; averaging them as exact
    # fractions makes the result the correctly rounded macro average.
    total = sum(
        Fraction(2 * int(a), 2 * int(a) + int(b) + int(c)) if a + b + c else Fraction(0)
        for a, b, c in zip(tp, fp, fn)
    )
    return float(total / len(tp))


def micro_f1(y_true, y_pred):
    t, p = _pair(y_true, y_pred)
    tp = np.sum(t & p)
    fp = np.sum(~t & p)
    fn = np.sum(t & ~p)
    return float(_f1(tp, fp, fn))


def average_precision(y_true, scores):
    """Label-ranking average precision.

    For each row with at least one positive, labels are ranked by descending
    score, and each positive label contributes the fraction of positives
    ranked at or above it. The result is the mean over those rows.

    Raises
    ------
    ValueError
        If no row has a positive label.
    """
    y_true = as_matrix(y_true, "y_true")
    scores = as_matrix(scores, "scores")
    if y_true.shape != scores.shape:
        raise DimensionError(f"y_true {y_true.shape} and scores {scores.shape} differ")
    positive = y_true > 0
    rows = np.flatnonzero(positive.any(axis=1))
    if rows.size == 0:
        raise ValueError("average precision undefined: no row has a positive label")

    total = 0.0
    for i in rows:
        order = np.argsort(-scores[i], kind="stable")
        hits = positive[i, order]
        ranks = np.flatnonzero(hits) + 1
        total += np.mean(np.arange(1, ranks.size + 1) / ranks)
    return float(total / rows.size)


def evaluate(y_true, y_pred, scores):
    return MetricReport(
        exact_match=exact_match(y_true, y_pred),
        hamming_loss=hamming_loss(y_true, y_pred),
        macro_f1=macro_f1(y_true, y_pred),
        micro_f1=micro_f1(y_true, y_pred),
        avg_precision=average_precision(y_true, scores),
    )
