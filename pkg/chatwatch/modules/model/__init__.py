from .configs import ModelConfig, TrainConfig
from .encoder import (
    IGNORE_INDEX,
    ChatEncoder,
    EncodedBatch,
    collate,
    embed_sequence,
    forward,
    masked_cross_entropy,
)
from .model_errors import (
    CheckpointError,
    EmbeddingRangeError,
    EmptySplitError,
    EmptySupervisionError,
    ShapeMismatchError,
    TokenLabelMismatch,
)
from .tokenizer import SPECIAL_TOKENS, Tokenizer, marker_tokens
from .checkpoint import FORMAT_VERSION, Checkpoint, fit_model_config
from .predictor import Predictor, predict_line
from .training import (
    EpochRecord,
    LabeledExample,
    TrainResult,
    build_tokenizer,
    encode_examples,
    evaluate_examples,
    loss_and_grad,
    make_batch,
    train,
)
from .gradcheck import GradCheckResult, check_gradients

__all__ = [
    "ModelConfig",
    "TrainConfig",
    "IGNORE_INDEX",
    "ChatEncoder",
    "EncodedBatch",
    "collate",
    "embed_sequence",
    "forward",
    "masked_cross_entropy",
    "CheckpointError",
    "EmbeddingRangeError",
    "EmptySplitError",
    "EmptySupervisionError",
    "ShapeMismatchError",
    "TokenLabelMismatch",
    "SPECIAL_TOKENS",
    "Tokenizer",
    "marker_tokens",
    "FORMAT_VERSION",
    "Checkpoint",
    "fit_model_config",
    "Predictor",
    "predict_line",
    "EpochRecord",
    "LabeledExample",
    "TrainResult",
    "build_tokenizer",
    "encode_examples",
    "evaluate_examples",
    "loss_and_grad",
    "make_batch",
    "train",
    "GradCheckResult",
    "check_gradients",
]
