from pathlib import Path

import pytest

from chatwatch.modules.context import MetadataMode, Scope
from chatwatch.modules.services import (
    SEED_ENV_VAR,
    ConfigError,
    apply_seed_override,
    load_mapping,
    load_run_config,
    parse_run_config,
)

FULL_CONFIG = """\
model:
  d_model: 32
  n_layers: 1
  n_heads: 2
train:
  learning_rate: 0.003
  seeds: [1, 2, 3]
  split: [0.6, 0.2, 0.2]
context:
  scope: team
  max_tokens: 128
  metadata_mode: in-line
paths:
  corpus: corpora/chat.jsonl
  output_dir: runs/team
notify:
  urls: ["json://localhost"]
"""


def test_full_config():
    config = parse_run_config(FULL_CONFIG, "run.yaml")
    assert config.model.d_model == 32
    assert config.train.seeds == (1, 2, 3)
    assert config.train.learning_rate == 0.003
    assert config.context.scope is Scope.TEAM
    assert config.context.metadata_mode is MetadataMode.IN_LINE
    assert config.paths.corpus == Path("corpora/chat.jsonl")
    assert config.paths.output_dir == Path("runs/team")
    assert config.notify.urls == ("json://localhost",)
    assert config.source == Path("run.yaml")


def test_defaults_only_need_corpus():
    config = parse_run_config("paths:\n  corpus: chat.jsonl\n")
    assert config.context.scope is Scope.GLOBAL
    assert config.context.max_tokens == 512
    assert config.train.seeds == (0, 1, 2, 3, 4)
    assert config.train.learning_rate == 1e-5


def test_unknown_key_reports_position():
    text = "paths:\n  corpus: chat.jsonl\ncontext:\n  scope: team\n  widht: 3\n"
    with pytest.raises(ConfigError) as e:
        parse_run_config(text, "run.yaml")
    assert (e.value.line, e.value.column) == (5, 3)
    assert "context.widht" in str(e.value)
    assert str(e.value).startswith("run.yaml:5:3")


def test_unknown_section_reports_position():
    with pytest.raises(ConfigError) as e:
        parse_run_config("paths:\n  corpus: a\nmodle:\n  d_model: 8\n")
    assert (e.value.line, e.value.column) == (3, 1)


def test_missing_corpus():
    for text in ("", "paths:\n  output_dir: runs\n", "model:\n  d_model: 8\n"):
        with pytest.raises(ConfigError, match="paths.corpus"):
            parse_run_config(text)


def test_invalid_values():
    with pytest.raises(ConfigError, match="context"):
        parse_run_config("paths:\n  corpus: a\ncontext:\n  scope: everyone\n")
    with pytest.raises(ConfigError, match="model"):
        parse_run_config("paths:\n  corpus: a\nmodel:\n  d_model: 30\n  n_heads: 4\n")
    with pytest.raises(ConfigError, match="syntax"):
        parse_run_config("paths: [\n")


def test_vocab_size_is_not_configurable():
    with pytest.raises(ConfigError, match="model.vocab_size"):
        parse_run_config("paths:\n  corpus: a\nmodel:\n  vocab_size: 100\n")


def test_seed_env_override():
    config = parse_run_config(FULL_CONFIG)
    assert apply_seed_override(config, {SEED_ENV_VAR: "7"}).train.seeds == (7,)
    assert apply_seed_override(config, {}).train.seeds == (1, 2, 3)
    assert apply_seed_override(config, {SEED_ENV_VAR: " "}).train.seeds == (1, 2, 3)
    with pytest.raises(ConfigError):
        apply_seed_override(config, {SEED_ENV_VAR: "seven"})


def test_load_run_config_reads_env(tmp_path, monkeypatch):
    path = tmp_path / "run.yaml"
    path.write_text(FULL_CONFIG)
    monkeypatch.setenv(SEED_ENV_VAR, "11")
    assert load_run_config(path).train.seeds == (11,)
    monkeypatch.delenv(SEED_ENV_VAR)
    assert load_run_config(path).train.seeds == (1, 2, 3)
    with pytest.raises(ConfigError, match="not found"):
        load_run_config(tmp_path / "missing.yaml")


def test_seed_env_var_name(tmp_path, monkeypatch):
    path = tmp_path / "run.yaml"
    path.write_text(FULL_CONFIG)
    monkeypatch.setenv("TOXBUSTER_SEED", "7")
    assert load_run_config(path).train.seeds == (7,)


def test_yaml_tags(tmp_path, monkeypatch):
    monkeypatch.setenv("CORPORA", "/data/corpora")
    config = parse_run_config('paths:\n  corpus: !EnvVar "${CORPORA}/chat.jsonl"\n  output_dir: !Path ~/runs\n')
    assert config.paths.corpus == Path("/data/corpora/chat.jsonl")
    assert config.paths.output_dir == Path("~/runs").expanduser()

    monkeypatch.delenv("CORPORA")
    with pytest.raises(ConfigError, match="CORPORA"):
        parse_run_config('paths:\n  corpus: !EnvVar "${CORPORA}/chat.jsonl"\n')


def test_load_mapping(tmp_path):
    path = tmp_path / "synth.yaml"
    path.write_text("n_matches: 5\nrules: [keyword, context]\n")
    assert load_mapping(path) == {"n_matches": 5, "rules": ["keyword", "context"]}
    path.write_text("")
    assert load_mapping(path) == {}
