from .builder import (
    DEFAULT_MAX_TOKENS,
    MAX_TOKEN_CHOICES,
    EncodedSequence,
    MetadataMode,
    TokenizerLike,
    TrackSizes,
    build_input,
    count_separators,
    history_length,
)
from .context_errors import RelativeIdOverflow, UnknownMetadataMode
from .relative_ids import RelativeIds, assign_relative_ids
from .scopes import Scope, select_history
from .settings import ContextConfig
from .truncation import truncate_pair

__all__ = [
    "DEFAULT_MAX_TOKENS",
    "MAX_TOKEN_CHOICES",
    "EncodedSequence",
    "MetadataMode",
    "TokenizerLike",
    "TrackSizes",
    "build_input",
    "count_separators",
    "history_length",
    "ContextConfig",
    "RelativeIdOverflow",
    "UnknownMetadataMode",
    "RelativeIds",
    "assign_relative_ids",
    "Scope",
    "select_history",
    "truncate_pair",
]
