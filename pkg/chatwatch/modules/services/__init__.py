from .config import (
    CONSTRUCTORS,
    SEED_ENV_VAR,
    NotifyConfig,
    PathsConfig,
    RunConfig,
    apply_seed_override,
    load_mapping,
    load_run_config,
    parse_run_config,
)
from .environmental_vars import env_var_constructor, path_constructor
from .service_errors import ConfigError, StreamOrderError
from .streaming import END_OF_MATCH, MatchState, StreamPredictor, predict_stream

__all__ = [
    "CONSTRUCTORS",
    "SEED_ENV_VAR",
    "NotifyConfig",
    "PathsConfig",
    "RunConfig",
    "apply_seed_override",
    "load_mapping",
    "load_run_config",
    "parse_run_config",
    "env_var_constructor",
    "path_constructor",
    "ConfigError",
    "StreamOrderError",
    "END_OF_MATCH",
    "MatchState",
    "StreamPredictor",
    "predict_stream",
]
