from dataclasses import dataclass
from typing import Dict, List, Sequence, Tuple

from chatwatch.modules.chat import (
    LabelSpace,
    LinePrediction,
    MatchSession,
    ToxicClass,
    line_class_from_tokens,
)
from chatwatch.modules.model.predictor import Predictor

from .eval_errors import MetricInputError
from .metrics import MetricsReport, binary_weighted_prf, weighted_prf


@dataclass(frozen=True)
class ScoredLine:
    """A prediction next to the gold labels of its line, projected into the
    predictor's label space."""

    prediction: LinePrediction
    gold_tokens: Tuple[ToxicClass, ...]

    @property
    def key(self) -> Tuple[str, int]:
        return (self.prediction.match_id, self.prediction.line_index)

    @property
    def gold_class(self) -> ToxicClass:
        if not self.gold_tokens:
            return ToxicClass.NON_TOXIC
        return line_class_from_tokens(self.gold_tokens)

    @property
    def class_scores(self) -> Dict[ToxicClass, float]:
        return dict(self.prediction.class_scores)


def project_labels(labels: Sequence[ToxicClass], space: LabelSpace) -> Tuple[ToxicClass, ...]:
    return tuple(space.project(c) for c in labels)


def score_sessions(
    predictor: Predictor, sessions: Sequence[MatchSession], batch_size: int = 32
) -> List[ScoredLine]:
    """Predict every labeled line of ``sessions``."""
    items = [
        (s, t)
        for s in sessions
        for t, line in enumerate(s.lines)
        if line.is_labeled
    ]
    predictions = predictor.predict_many(items, batch_size)
    scored = []
    for (s, t), prediction in zip(items, predictions):
        gold = project_labels(s.lines[t].token_labels or (), predictor.label_space)
        if len(gold) < len(prediction.tokens):
            raise MetricInputError(
                f"{s.match_id}#{s.lines[t].line_index}: {len(gold)} gold labels for "
                f"{len(prediction.tokens)} predicted tokens"
            )
        scored.append(ScoredLine(prediction, gold))
    return scored


def token_pairs(scored: Sequence[ScoredLine]) -> Tuple[List[ToxicClass], List[ToxicClass]]:
    """Predicted and gold classes of every scored token."""
    preds: List[ToxicClass] = []
    golds: List[ToxicClass] = []
    for line in scored:
        for token, gold in zip(line.prediction.tokens, line.gold_tokens):
            preds.append(token.toxic_class)
            golds.append(gold)
    return preds, golds


def line_pairs(scored: Sequence[ScoredLine]) -> Tuple[List[ToxicClass], List[ToxicClass]]:
    return [s.prediction.line_class for s in scored], [s.gold_class for s in scored]


def evaluate_scored(
    scored: Sequence[ScoredLine], binary: bool = False
) -> Dict[str, MetricsReport]:
    """Token-level and line-level weighted metrics, tagged by level."""
    score = binary_weighted_prf if binary else weighted_prf
    return {
        "token": score(*token_pairs(scored), level="token"),
        "line": score(*line_pairs(scored), level="line"),
    }
