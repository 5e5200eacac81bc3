"""Support-weighted precision, recall and F1 over toxic classes."""

from dataclasses import dataclass, field
from typing import Any, Dict, List, Sequence

import numpy as np
from sklearn.metrics import precision_recall_fscore_support

from chatwatch.modules.chat import ToxicClass

from .eval_errors import MetricInputError

LEVELS = ("token", "line")
FIELDS = ("precision", "recall", "f1")


@dataclass(frozen=True)
class ClassMetrics:
    precision: float
    recall: float
    f1: float
    support: int


@dataclass(frozen=True)
class MetricsReport:
    """
    Weighted metrics plus the per-class breakdown they were averaged from.
    ``level`` says whether the items were tokens or whole lines.
    """

    level: str
    precision: float
    recall: float
    f1: float
    support: int
    per_class: Dict[ToxicClass, ClassMetrics] = field(default_factory=dict)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "level": self.level,
            "precision": self.precision,
            "recall": self.recall,
            "f1": self.f1,
            "support": self.support,
            "per_class": {
                c.value: {
                    "precision": m.precision,
                    "recall": m.recall,
                    "f1": m.f1,
                    "support": m.support,
                }
                for c, m in self.per_class.items()
            },
        }


def weighted_prf(
    preds: Sequence[ToxicClass], golds: Sequence[ToxicClass], level: str = "token"
) -> MetricsReport:
    """
    Per-class P/R/F1 and their support-weighted means. Classes absent from
    the gold labels get zero weight; a class never predicted has P = 0.

    Raises
    ------
    MetricInputError
        On empty input, mismatched lengths or an unknown level.
    """
    if level not in LEVELS:
        raise MetricInputError(f"level must be one of {LEVELS}, got {level!r}")
    if len(preds) != len(golds):
        raise MetricInputError(f"{len(preds)} predictions for {len(golds)} gold labels")
    if not golds:
        raise MetricInputError("no items to score")

    present = set(preds) | set(golds)
    classes = [c for c in ToxicClass if c in present]
    values = [c.value for c in classes]
    precision, recall, f1, support = precision_recall_fscore_support(
        [g.value for g in golds],
        [p.value for p in preds],
        labels=values,
        average=None,
        zero_division=0,
    )
    weights = support / support.sum()
    per_class = {
        c: ClassMetrics(float(precision[i]), float(recall[i]), float(f1[i]), int(support[i]))
        for i, c in enumerate(classes)
    }
    return MetricsReport(
        level=level,
        precision=float(np.dot(weights, precision)),
        recall=float(np.dot(weights, recall)),
        f1=float(np.dot(weights, f1)),
        support=int(support.sum()),
        per_class=per_class,
    )


def to_binary(classes: Sequence[ToxicClass]) -> List[ToxicClass]:
    """Collapse every toxic class onto one toxic label."""
    return [ToxicClass.OTHER_OFFENSIVE if c.is_toxic else ToxicClass.NON_TOXIC for c in classes]


def binary_weighted_prf(
    preds: Sequence[ToxicClass], golds: Sequence[ToxicClass], level: str = "token"
) -> MetricsReport:
    return weighted_prf(to_binary(preds), to_binary(golds), level)


@dataclass(frozen=True)
class MetricSummary:
    """Mean and standard deviation of weighted metrics over seeds."""

    level: str
    n_runs: int
    mean: Dict[str, float]
    std: Dict[str, float]

    def to_dict(self) -> Dict[str, Any]:
        return {"level": self.level, "n_runs": self.n_runs, "mean": self.mean, "std": self.std}

    def formatted(self, name: str) -> str:
        return f"{100 * self.mean[name]:.2f} ± {100 * self.std[name]:.2f}"


def summarize_reports(reports: Sequence[MetricsReport]) -> MetricSummary:
    if not reports:
        raise MetricInputError("no reports to summarize")
    levels = {r.level for r in reports}
    if len(levels) != 1:
        raise MetricInputError(f"cannot mix levels {sorted(levels)}")
    table = np.array([[getattr(r, f) for f in FIELDS] for r in reports], dtype=np.float64)
    ddof = 1 if len(reports) > 1 else 0
    mean = table.mean(axis=0)
    std = table.std(axis=0, ddof=ddof)
    return MetricSummary(
        level=levels.pop(),
        n_runs=len(reports),
        mean={f: float(v) for f, v in zip(FIELDS, mean)},
        std={f: float(v) for f, v in zip(FIELDS, std)},
    )

