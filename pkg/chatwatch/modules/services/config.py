"""
YAML run configuration::

    model:    {d_model: 64, n_layers: 2, n_heads: 2, d_ff: 256, dropout: 0.1}
    train:    {learning_rate: 1.0e-5, max_epochs: 100, patience: 5, seeds: [0, 1, 2, 3, 4], ...}
    context:  {scope: global, max_tokens: 512, metadata_mode: speaker-segmentation,
               team_size: 5, num_teams: 2}
    paths:    {corpus: !Path ~/corpora/chat.jsonl, output_dir: runs, vocab: null}
    notify:   {urls: [...]}

Every key except ``paths.corpus`` has a default. Unknown sections and keys
are rejected with their line and column.
"""

import os
from dataclasses import dataclass, field, fields, replace
from pathlib import Path
from typing import Any, Callable, Dict, Mapping, Optional, Tuple, Type, Union

import yaml

from chatwatch.modules.context import ContextConfig
from chatwatch.modules.model import ModelConfig, TrainConfig

from .environmental_vars import env_var_constructor, path_constructor
from .service_errors import ConfigError

SEED_ENV_VAR = "TOXBUSTER_SEED"
# Sizes the data decides; not user-settable.
MODEL_KEYS = ("d_model", "n_layers", "n_heads", "d_ff", "dropout", "init_std")

CONSTRUCTORS: Dict[str, Callable] = {
    "!EnvVar": env_var_constructor,
    "!Path": path_constructor,
}


class ConfigLoader(yaml.SafeLoader):
    pass


for _tag, _constructor in CONSTRUCTORS.items():
    ConfigLoader.add_constructor(_tag, _constructor)


@dataclass(frozen=True)
class PathsConfig:
    corpus: Path
    output_dir: Path = Path("runs")
    vocab: Optional[Path] = None


@dataclass(frozen=True)
class NotifyConfig:
    urls: Tuple[str, ...] = ()


@dataclass(frozen=True)
class RunConfig:
    paths: PathsConfig
    model: ModelConfig = field(default_factory=ModelConfig)
    train: TrainConfig = field(default_factory=TrainConfig)
    context: ContextConfig = field(default_factory=ContextConfig)
    notify: NotifyConfig = field(default_factory=NotifyConfig)
    source: Optional[Path] = None

    def with_seeds(self, seeds: Tuple[int, ...]) -> "RunConfig":
        return replace(self, train=replace(self.train, seeds=tuple(seeds)))


def _field_names(cls: Type) -> Tuple[str, ...]:
    return tuple(f.name for f in fields(cls))


SECTIONS: Dict[str, Tuple[str, ...]] = {
    "model": MODEL_KEYS,
    "train": _field_names(TrainConfig),
    "context": _field_names(ContextConfig),
    "paths": _field_names(PathsConfig),
    "notify": _field_names(NotifyConfig),
}
BUILDERS: Dict[str, Callable[[Dict[str, Any]], Any]] = {
    "model": lambda v: ModelConfig(**v),
    "train": lambda v: TrainConfig(**v),
    "context": ContextConfig.from_dict,
    "paths": lambda v: PathsConfig(**v),
    "notify": lambda v: NotifyConfig(**v),
}
TUPLE_KEYS = ("split", "seeds", "urls")
PATH_KEYS = ("corpus", "output_dir", "vocab", "init_checkpoint")


def _where(node: yaml.Node, source: Optional[str]) -> Dict[str, Any]:
    return {
        "line": node.start_mark.line + 1,
        "column": node.start_mark.column + 1,
        "source": source,
    }


def _compose(text: str, source: Optional[str]) -> Tuple[ConfigLoader, Optional[yaml.Node]]:
    loader = ConfigLoader(text)
    try:
        return loader, loader.get_single_node()
    except yaml.MarkedYAMLError as e:
        loader.dispose()
        mark = e.problem_mark
        raise ConfigError(
            f"YAML syntax error: {e.problem}",
            line=mark.line + 1 if mark else None,
            column=mark.column + 1 if mark else None,
            source=source,
        ) from None


def _normalise(key: str, value: Any) -> Any:
    if key in TUPLE_KEYS and isinstance(value, list):
        return tuple(value)
    if key in PATH_KEYS and isinstance(value, (str, Path)):
        path = Path(value).expanduser()
        return str(path) if key == "init_checkpoint" else path
    return value


def _section(
    loader: ConfigLoader, name: str, node: yaml.Node, source: Optional[str]
) -> Dict[str, Any]:
    if node.tag == "tag:yaml.org,2002:null":
        return {}
    if not isinstance(node, yaml.MappingNode):
        raise ConfigError(f"section {name} must be a mapping", **_where(node, source))
    allowed = SECTIONS[name]
    values: Dict[str, Any] = {}
    for key_node, value_node in node.value:
        key = str(key_node.value)
        if key not in allowed:
            raise ConfigError(
                f"unknown key {name}.{key} (allowed: {', '.join(allowed)})",
                **_where(key_node, source),
            )
        values[key] = _normalise(key, loader.construct_object(value_node, deep=True))
    return values


def parse_run_config(text: str, source: Optional[str] = None) -> RunConfig:
    """
    Raises
    ------
    ConfigError
        On YAML syntax errors, unknown keys, a missing ``paths.corpus`` or
        invalid values; positions are 1-based.
    """
    loader, root = _compose(text, source)
    try:
        if root is None:
            raise ConfigError("missing required key paths.corpus", line=1, column=1, source=source)
        if not isinstance(root, yaml.MappingNode):
            raise ConfigError("configuration must be a mapping", **_where(root, source))

        built: Dict[str, Any] = {}
        for key_node, value_node in root.value:
            name = str(key_node.value)
            if name not in SECTIONS:
                raise ConfigError(
                    f"unknown section {name} (allowed: {', '.join(SECTIONS)})",
                    **_where(key_node, source),
                )
            values = _section(loader, name, value_node, source)
            if name == "paths" and "corpus" not in values:
                raise ConfigError("missing required key paths.corpus", **_where(key_node, source))
            try:
                built[name] = BUILDERS[name](values)
            except (TypeError, ValueError) as e:
                raise ConfigError(f"invalid {name} section: {e}", **_where(key_node, source)) from None
    finally:
        loader.dispose()

    if "paths" not in built:
        raise ConfigError("missing required key paths.corpus", line=1, column=1, source=source)
    return RunConfig(source=Path(source) if source else None, **built)


def load_run_config(path: Union[str, Path]) -> RunConfig:
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except FileNotFoundError:
        raise ConfigError("configuration file not found", source=str(path)) from None
    return apply_seed_override(parse_run_config(text, str(path)))


def apply_seed_override(
    config: RunConfig, environ: Optional[Mapping[str, str]] = None
) -> RunConfig:
    """``TOXBUSTER_SEED`` replaces the configured seed list with one seed."""
    environ = os.environ if environ is None else environ
    raw = environ.get(SEED_ENV_VAR)
    if raw is None or raw.strip() == "":
        return config
    try:
        seed = int(raw)
    except ValueError:
        raise ConfigError(f"{SEED_ENV_VAR} must be an integer, got {raw!r}") from None
    return config.with_seeds((seed,))


def load_mapping(path: Union[str, Path]) -> Dict[str, Any]:
    """Plain mapping document (synthetic corpus settings) with the same tags."""
    path = Path(path)
    loader, root = _compose(path.read_text(encoding="utf-8"), str(path))
    try:
        if root is None:
            return {}
        if not isinstance(root, yaml.MappingNode):
            raise ConfigError("document must be a mapping", **_where(root, str(path)))
        return {
            str(k.value): loader.construct_object(v, deep=True) for k, v in root.value
        }
    finally:
        loader.dispose()
