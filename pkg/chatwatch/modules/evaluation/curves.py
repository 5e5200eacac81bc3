"""
Precision-recall curves over line toxic-scores and the operating points
picked from them.
"""

import math
from dataclasses import dataclass
from typing import Any, Dict, List, Optional, Sequence, Tuple

import numpy as np
import pandas as pd
from sklearn.metrics import average_precision_score, precision_recall_curve

from chatwatch.modules.chat import ToxicClass

from .eval_errors import MetricInputError

NO_THRESHOLD = math.inf
DEFAULT_PRECISIONS = (0.90, 0.99, 0.999)


@dataclass(frozen=True)
class PRPoint:
    threshold: float
    precision: float
    recall: float


@dataclass(frozen=True)
class PRCurve:
    """Points ordered by strictly decreasing threshold."""

    points: Tuple[PRPoint, ...]
    average_precision: float
    n_positive: int
    n_total: int

    @property
    def thresholds(self) -> List[float]:
        return [p.threshold for p in self.points]

    def to_frame(self) -> pd.DataFrame:
        return pd.DataFrame(
            [(p.threshold, p.precision, p.recall) for p in self.points],
            columns=["threshold", "precision", "recall"],
        )


def _as_arrays(scores: Sequence[float], gold: Sequence[bool]) -> Tuple[np.ndarray, np.ndarray]:
    if len(scores) != len(gold):
        raise MetricInputError(f"{len(scores)} scores for {len(gold)} gold labels")
    if len(scores) == 0:
        raise MetricInputError("no scores")
    y_score = np.asarray(scores, dtype=np.float64)
    if ((y_score < 0) | (y_score > 1)).any() or np.isnan(y_score).any():
        raise MetricInputError("scores must lie in [0, 1]")
    return y_score, np.asarray(gold, dtype=bool)


def pr_curve(scores: Sequence[float], gold: Sequence[bool]) -> PRCurve:
    """
    One point per distinct score, flagging every item scored at or above it,
    and the step-wise average precision.

    Without a positive item every point has precision and recall 0 and the
    average precision is 0.0, so no target precision is reachable.

    Raises
    ------
    MetricInputError
        On empty input or scores outside [0, 1].
    """
    y_score, y_true = _as_arrays(scores, gold)
    if not y_true.any():
        return PRCurve(
            points=tuple(PRPoint(float(t), 0.0, 0.0) for t in np.unique(y_score)[::-1]),
            average_precision=0.0,
            n_positive=0,
            n_total=len(y_true),
        )
    precision, recall, thresholds = precision_recall_curve(
        y_true, y_score, drop_intermediate=False
    )
    # sklearn orders by increasing threshold and appends a (P=1, R=0) end point
    points = tuple(
        PRPoint(float(t), float(p), float(r))
        for t, p, r in zip(thresholds[::-1], precision[-2::-1], recall[-2::-1])
    )
    return PRCurve(
        points=points,
        average_precision=float(average_precision_score(y_true, y_score)),
        n_positive=int(y_true.sum()),
        n_total=len(y_true),
    )


def recall_at_precision(curve: PRCurve, p: float) -> Tuple[float, float]:
    """
    Highest recall among points with precision >= ``p`` and the threshold
    realising it (the higher one on ties). ``(0.0, inf)`` when no point
    qualifies.
    """
    if not 0.0 < p <= 1.0:
        raise MetricInputError(f"target precision must be in (0, 1], got {p}")
    best: Optional[PRPoint] = None
    for point in curve.points:
        if point.precision >= p and (best is None or point.recall > best.recall):
            best = point
    if best is None:
        return 0.0, NO_THRESHOLD
    return best.recall, best.threshold


@dataclass(frozen=True)
class OperatingPoint:
    target_precision: float
    threshold: float
    precision: float
    recall: float

    @property
    def reachable(self) -> bool:
        return not math.isinf(self.threshold)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "target_precision": self.target_precision,
            "threshold": self.threshold if self.reachable else None,
            "precision": self.precision,
            "recall": self.recall,
        }

    @classmethod
    def from_dict(cls, values: Dict[str, Any]) -> "OperatingPoint":
        threshold = values.get("threshold")
        return cls(
            target_precision=float(values["target_precision"]),
            threshold=NO_THRESHOLD if threshold is None else float(threshold),
            precision=float(values.get("precision", 0.0)),
            recall=float(values.get("recall", 0.0)),
        )


def operating_points(
    curve: PRCurve, precisions: Sequence[float] = DEFAULT_PRECISIONS
) -> List[OperatingPoint]:
    by_threshold = {pt.threshold: pt for pt in curve.points}
    out = []
    for p in precisions:
        recall, threshold = recall_at_precision(curve, p)
        point = by_threshold.get(threshold)
        out.append(
            OperatingPoint(
                target_precision=p,
                threshold=threshold,
                precision=point.precision if point else 0.0,
                recall=recall,
            )
        )
    return out


def per_class_curves(
    class_scores: Sequence[Dict[ToxicClass, float]], gold_classes: Sequence[ToxicClass]
) -> Dict[ToxicClass, PRCurve]:
    """One-vs-rest curves for every toxic class that has a positive line."""
    if len(class_scores) != len(gold_classes):
        raise MetricInputError(f"{len(class_scores)} score rows for {len(gold_classes)} lines")
    curves = {}
    for c in ToxicClass:
        if not c.is_toxic or c not in gold_classes:
            continue
        scores = [min(max(row.get(c, 0.0), 0.0), 1.0) for row in class_scores]
        curves[c] = pr_curve(scores, [g is c for g in gold_classes])
    return curves


def class_recall_at_threshold(
    scores: Sequence[float], gold_classes: Sequence[ToxicClass], threshold: float
) -> Dict[ToxicClass, Tuple[float, int]]:
    """
    Recall of each gold toxic class when lines scored at or above the binary
    ``threshold`` are flagged, with the class support.
    """
    if len(scores) != len(gold_classes):
        raise MetricInputError(f"{len(scores)} scores for {len(gold_classes)} lines")
    out = {}
    for c in ToxicClass:
        if not c.is_toxic:
            continue
        hits = [s >= threshold for s, g in zip(scores, gold_classes) if g is c]
        if hits:
            out[c] = (sum(hits) / len(hits), len(hits))
    return out


def intercept_rate(scores: Sequence[float], threshold: float) -> float:
    """Share of lines flagged at ``threshold``."""
    if len(scores) == 0:
        raise MetricInputError("no scores")
    return float(np.mean(np.asarray(scores) >= threshold))
