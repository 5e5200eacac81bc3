from .chat import ChatLine, LabelSpace, LinePrediction, MatchSession, ToxicClass
from .context import ContextConfig, MetadataMode, Scope
from .model import Checkpoint, ModelConfig, Predictor, Tokenizer, TrainConfig, train
from .services import CONSTRUCTORS, RunConfig, StreamPredictor, load_run_config

__all__ = [
    "ChatLine",
    "LabelSpace",
    "LinePrediction",
    "MatchSession",
    "ToxicClass",
    "ContextConfig",
    "MetadataMode",
    "Scope",
    "Checkpoint",
    "ModelConfig",
    "Predictor",
    "Tokenizer",
    "TrainConfig",
    "train",
    "CONSTRUCTORS",
    "RunConfig",
    "StreamPredictor",
    "load_run_config",
]
