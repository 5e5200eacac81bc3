from dataclasses import dataclass
from typing import Any, Dict, List, Mapping, Sequence

import numpy as np
import pandas as pd

from chatwatch.cwlogger import logger
from chatwatch.modules.chat import MatchSession
from chatwatch.modules.context import MetadataMode
from chatwatch.modules.model.checkpoint import Checkpoint
from chatwatch.modules.model.predictor import Predictor
from chatwatch.modules.model.tokenizer import SPECIAL_TOKENS, marker_tokens

from .eval_errors import TransferError
from .metrics import binary_weighted_prf
from .scoring import line_pairs, score_sessions, token_pairs


@dataclass(frozen=True)
class TransferMatrix:
    """Binary weighted F1 of each training corpus' model (rows) on each
    test corpus (columns)."""

    train_names: List[str]
    test_names: List[str]
    values: np.ndarray
    level: str = "token"

    def __getitem__(self, key) -> float:
        train, test = key
        return float(self.values[self.train_names.index(train), self.test_names.index(test)])

    def to_frame(self) -> pd.DataFrame:
        return pd.DataFrame(self.values, index=self.train_names, columns=self.test_names)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "level": self.level,
            "binary_weighted_f1": {
                train: {test: self[train, test] for test in self.test_names}
                for train in self.train_names
            },
        }


def check_compatible(name: str, checkpoint: Checkpoint) -> None:
    """
    Raises
    ------
    TransferError
        If the checkpoint's vocabulary cannot drive its own model.
    """
    vocab = checkpoint.vocab
    if len(vocab) != checkpoint.model_config.vocab_size:
        raise TransferError(
            name,
            f"vocabulary of {len(vocab)} tokens for an embedding of "
            f"{checkpoint.model_config.vocab_size}",
        )
    if tuple(vocab[: len(SPECIAL_TOKENS)]) != SPECIAL_TOKENS:
        raise TransferError(name, "vocabulary lacks the special tokens")
    if checkpoint.context.metadata_mode is MetadataMode.IN_LINE:
        sizes = checkpoint.model_config.track_sizes
        missing = set(marker_tokens(sizes.n_players, sizes.n_teams)) - set(vocab)
        if missing:
            raise TransferError(name, f"vocabulary lacks markers {sorted(missing)[:3]}")


def transfer_matrix(
    checkpoints: Mapping[str, Checkpoint],
    corpora: Mapping[str, Sequence[MatchSession]],
    level: str = "token",
) -> TransferMatrix:
    """
    Evaluate every checkpoint on every corpus as toxic vs. non-toxic; the
    diagonal (same name) is in-domain.
    """
    if level not in ("token", "line"):
        raise ValueError(f"level must be 'token' or 'line', got {level!r}")
    for name, checkpoint in checkpoints.items():
        check_compatible(name, checkpoint)

    train_names = list(checkpoints)
    test_names = list(corpora)
    values = np.zeros((len(train_names), len(test_names)))
    for i, train in enumerate(train_names):
        predictor = Predictor(checkpoints[train])
        for j, test in enumerate(test_names):
            scored = score_sessions(predictor, corpora[test])
            pairs = token_pairs(scored) if level == "token" else line_pairs(scored)
            values[i, j] = binary_weighted_prf(*pairs, level=level).f1
            logger.info(f"Transfer {train} -> {test}: binary F1 {values[i, j]:.4f}")
    return TransferMatrix(train_names, test_names, values, level)
