from typing import List, Optional, Sequence, Tuple

import torch

from chatwatch.modules.chat import (
    LabeledToken,
    LinePrediction,
    MatchSession,
    ToxicClass,
    line_class_from_tokens,
)
from chatwatch.modules.context import EncodedSequence, Scope, build_input

from .checkpoint import Checkpoint
from .encoder import collate


class Predictor:
    """
    Scores chat lines with a loaded checkpoint. The underlying model is in
    eval mode and never mutated, so one instance can serve many sessions.

    Parameters
    ----------
    checkpoint : Checkpoint
        Trained weights plus the context settings they expect.
    scope : Optional[Scope], optional
        History scope override, by default the checkpoint's own scope.
    """

    def __init__(self, checkpoint: Checkpoint, scope: Optional[Scope] = None):
        self.checkpoint = checkpoint
        self.context = checkpoint.context
        self.scope = scope if scope is not None else self.context.scope
        self.tokenizer = checkpoint.tokenizer
        self.label_space = checkpoint.label_space
        self.model = checkpoint.build_model()

    def encode(self, s: MatchSession, target: int) -> EncodedSequence:
        return build_input(
            s,
            target,
            self.scope,
            self.tokenizer,
            max_tokens=self.context.max_tokens,
            metadata_mode=self.context.metadata_mode,
            track_sizes=self.model.config.track_sizes,
        )

    def predict_line(self, s: MatchSession, target: int) -> LinePrediction:
        return self.predict_many([(s, target)])[0]

    def predict_session(self, s: MatchSession, batch_size: int = 32) -> List[LinePrediction]:
        return self.predict_many([(s, t) for t in range(len(s.lines))], batch_size)

    def predict_many(
        self, items: Sequence[Tuple[MatchSession, int]], batch_size: int = 32
    ) -> List[LinePrediction]:
        predictions: List[LinePrediction] = []
        for i in range(0, len(items), batch_size):
            chunk = items[i : i + batch_size]
            sequences = [self.encode(s, t) for s, t in chunk]
            batch = collate(sequences, self.model.config.pad_id, self.model.config.track_sizes)
            with torch.no_grad():
                probs = self.model.distributions(batch)
            for (s, t), seq, row in zip(chunk, sequences, probs):
                predictions.append(self._line_prediction(s, t, seq, row))
        return predictions

    def _line_prediction(
        self, s: MatchSession, target: int, seq: EncodedSequence, probs: torch.Tensor
    ) -> LinePrediction:
        line = s.lines[target]
        start, end = seq.current_line_span
        token_probs = probs[start:end].to(torch.float64)
        texts = self.tokenizer.tokenize(line.text)[: end - start]
        classes = self.label_space.classes

        if end == start:
            return LinePrediction(
                match_id=line.match_id,
                line_index=line.line_index,
                player_key=line.player_key,
                tokens=(),
                line_class=ToxicClass.NON_TOXIC,
                score=0.0,
                class_scores=tuple((c, 0.0) for c in classes if c.is_toxic),
            )

        best_prob, best_idx = token_probs.max(dim=-1)
        tokens = tuple(
            LabeledToken(text, classes[int(k)], min(max(float(p), 0.0), 1.0))
            for text, k, p in zip(texts, best_idx, best_prob)
        )
        toxicity = 1.0 - token_probs[:, self.label_space.non_toxic_index]
        class_max = token_probs.max(dim=0).values
        return LinePrediction(
            match_id=line.match_id,
            line_index=line.line_index,
            player_key=line.player_key,
            tokens=tokens,
            line_class=line_class_from_tokens([tok.toxic_class for tok in tokens]),
            score=min(max(float(toxicity.max()), 0.0), 1.0),
            class_scores=tuple(
                (c, float(class_max[k])) for k, c in enumerate(classes) if c.is_toxic
            ),
        )


def predict_line(
    s: MatchSession,
    target: int,
    scope: Scope,
    checkpoint: Checkpoint,
) -> LinePrediction:
    """One-off prediction; build a :class:`Predictor` to score many lines."""
    return Predictor(checkpoint, scope).predict_line(s, target)
