"""
YAML constructors for run configurations.

``!EnvVar "${HOME}/corpora"`` expands environment variables and
``!Path "~/runs"`` expands the user directory.
"""

import os
import re
from pathlib import Path

import yaml

from .service_errors import ConfigError

ENV_PATTERN = re.compile(r"\$\{([^}{]+)\}")


def _mark(node: yaml.Node) -> dict:
    return {"line": node.start_mark.line + 1, "column": node.start_mark.column + 1}


def env_var_constructor(loader: yaml.SafeLoader, node: yaml.Node) -> str:
    """
    Substitute every ``${VAR}`` of a scalar.

    Raises
    ------
    ConfigError
        If a referenced variable is not set.
    """
    value = str(loader.construct_scalar(node))
    names = ENV_PATTERN.findall(value)
    missing = [name for name in names if os.getenv(name) is None]
    if missing:
        raise ConfigError(
            f"Environmental variable(s) not found: {','.join(missing)}", **_mark(node)
        )
    return ENV_PATTERN.sub(lambda m: os.environ[m.group(1)], value)


def path_constructor(loader: yaml.SafeLoader, node: yaml.Node) -> Path:
    return Path(str(loader.construct_scalar(node))).expanduser()
