"""F1 binned by how much chat history a line had available."""

from dataclasses import dataclass
from typing import Any, Dict, List, Optional, Sequence, Tuple

from chatwatch.modules.chat import LinePrediction, MatchSession, ToxicClass
from chatwatch.modules.context import Scope, history_length

from .eval_errors import MetricInputError
from .metrics import weighted_prf

HISTORY_BINS: Tuple[Tuple[str, int, Optional[int]], ...] = (
    ("0", 0, 0),
    ("1", 1, 1),
    ("2-10", 2, 10),
    ("11-20", 11, 20),
    ("21-30", 21, 30),
    ("31-40", 31, 40),
    ("41+", 41, None),
)


def history_bin(n: int) -> str:
    for label, low, high in HISTORY_BINS:
        if n >= low and (high is None or n <= high):
            return label
    raise ValueError(f"negative history length {n}")


@dataclass(frozen=True)
class BinReport:
    label: str
    support: int
    precision: Optional[float] = None
    recall: Optional[float] = None
    f1: Optional[float] = None

    def to_dict(self) -> Dict[str, Any]:
        return {
            "bin": self.label,
            "support": self.support,
            "precision": self.precision,
            "recall": self.recall,
            "f1": self.f1,
        }


def history_length_report(
    preds: Sequence[LinePrediction],
    golds: Sequence[ToxicClass],
    sessions: Sequence[MatchSession],
    scope: Scope = Scope.MODERATOR,
) -> List[BinReport]:
    """
    Line-level weighted metrics per history-length bin. History length is
    the number of earlier lines visible under ``scope``; empty bins are
    reported with support 0.

    Raises
    ------
    MetricInputError
        If a prediction names a line missing from ``sessions``.
    """
    if len(preds) != len(golds):
        raise MetricInputError(f"{len(preds)} predictions for {len(golds)} gold labels")
    positions = {
        (s.match_id, line.line_index): (s, t)
        for s in sessions
        for t, line in enumerate(s.lines)
    }
    binned: Dict[str, Tuple[List[ToxicClass], List[ToxicClass]]] = {
        label: ([], []) for label, _, _ in HISTORY_BINS
    }
    for pred, gold in zip(preds, golds):
        where = positions.get((pred.match_id, pred.line_index))
        if where is None:
            raise MetricInputError(f"no session line for {pred.match_id}#{pred.line_index}")
        s, t = where
        bucket = binned[history_bin(history_length(s, t, scope))]
        bucket[0].append(pred.line_class)
        bucket[1].append(gold)

    reports = []
    for label, _, _ in HISTORY_BINS:
        p, g = binned[label]
        if not g:
            reports.append(BinReport(label, 0))
            continue
        m = weighted_prf(p, g, level="line")
        reports.append(BinReport(label, len(g), m.precision, m.recall, m.f1))
    return reports
