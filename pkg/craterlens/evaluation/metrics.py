from dataclasses import dataclass

from dataclasses_json import dataclass_json

from craterlens.utils import ArgumentError

__all__ = ["Metrics", "f1_score", "metrics", "metric_gain"]


@dataclass_json
@dataclass(frozen=True)
class Metrics:
    """Precision, recall and F1, in percent."""

    precision: float
    recall: float
    f1: float


def f1_score(precision: float, recall: float) -> float:
    """Harmonic mean of precision and recall; 0 when both are 0."""
    if precision + recall == 0:
        return 0.0
    if precision == recall:
        return precision
    return 2.0 * precision * recall / (precision + recall)


def metrics(tp: int, fp: int, fn: int) -> Metrics:
    if min(tp, fp, fn) < 0:
        raise ArgumentError(f"Counts must be non-negative, got tp={tp} fp={fp} fn={fn}")
    precision = 100.0 * tp / (tp + fp) if tp + fp else 0.0
    recall = 100.0 * tp / (tp + fn) if tp + fn else 0.0
    return Metrics(precision, recall, f1_score(precision, recall))


def metric_gain(baseline: Metrics, other: Metrics) -> Metrics:
    """Improvement of `other` over `baseline`, percentage points."""
    return Metrics(
        precision=other.precision - baseline.precision,
        recall=other.recall - baseline.recall,
        f1=other.f1 - baseline.f1,
    )
