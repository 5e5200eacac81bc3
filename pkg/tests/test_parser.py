import json

import _chat_helpers as _chat
import _parser_helpers as _help
import pytest
import torch

from chatwatch.modules.adapters import SyntheticConfig, generate_synthetic
from chatwatch.modules.chat import FULL, chat_line_to_record, write_sessions
from chatwatch.modules.context import ContextConfig
from chatwatch.modules.model import Checkpoint, ChatEncoder

TEST_COMMANDS = _help.load_test_commands()


def test_string_parsing():
    """Every command string parses to (at least) its expected values."""
    for subcommand, test_data in TEST_COMMANDS.items():
        for command, expected_dict in test_data.items():
            args = _help.parse_mock_command(command)
            for k, v in expected_dict.items():
                assert k in args, f"{command}: missing {k}"
                assert args[k] == v, f"{command}: {k}={args[k]!r}"


@pytest.mark.parametrize(
    "command",
    [
        "train run.yaml --seeds -1",
        "eval model.pt test.jsonl -p 0.9,1.5",
        "moderate preds.jsonl reports.json",
        "moderate preds.jsonl reports.json -c eval.json -t 0.5",
        "moderate preds.jsonl reports.json -t 2",
        "predict model.pt --scope everyone",
        "predict model.pt --idle-budget 0",
        "transfer --checkpoint a.pt --corpus a=a.jsonl",
        "adapt reddit in.csv out.jsonl",
    ],
)
def test_invalid_arguments(command):
    with pytest.raises(SystemExit) as e:
        _help.parse_mock_command(command)
    assert e.value.code == 2


def test_no_subcommand_prints_help(capsys):
    assert _help.process_command([]) == 2
    assert "subcommands" in capsys.readouterr().out


def test_config_errors_exit_2(tmp_path):
    missing = _help.write_config(tmp_path / "run.yaml", tmp_path / "nope.jsonl", tmp_path / "runs")
    assert _help.run(f"train {missing}") == 2

    bad_key = tmp_path / "bad.yaml"
    bad_key.write_text(f"paths:\n  corpus: {tmp_path / 'nope.jsonl'}\ncontext:\n  widht: 3\n")
    assert _help.run(f"train {bad_key}") == 2

    synth = tmp_path / "synth.yaml"
    synth.write_text("rules: [telepathy]\n")
    assert _help.run(f"synth {tmp_path / 'out.jsonl'} --config {synth}") == 2

    assert _help.run(f"adapt annotations {tmp_path / 'a.jsonl'} {tmp_path / 'b.jsonl'}") == 2

    gapped = _chat.write_jsonl(
        tmp_path / "gapped.jsonl",
        [
            {"match_id": "m", "line_index": i, "player_key": "a", "team_key": "t0",
             "chat_type": "all", "text": "hi", "token_labels": ["non_toxic"]}
            for i in (0, 2)
        ],
    )
    gapped_config = _help.write_config(tmp_path / "gapped.yaml", gapped, tmp_path / "runs")
    assert _help.run(f"train {gapped_config}") == 2


def test_missing_files_exit_4(tmp_path):
    assert _help.run(f"predict {tmp_path / 'missing.pt'}") == 4
    assert _help.run(f"train {tmp_path / 'missing.yaml'}") == 2
    assert _help.run(f"synth {tmp_path / 'out.jsonl'} --config {tmp_path / 'missing.yaml'}") == 4


def test_out_of_order_stream_exits_3(tmp_path):
    context = ContextConfig(max_tokens=128)
    sessions = generate_synthetic(SyntheticConfig(n_matches=1, min_lines=4, max_lines=4), seed=0)
    tokenizer = _chat.tokenizer_for(sessions, context)
    torch.manual_seed(0)
    model = ChatEncoder(_chat.tiny_model_config(tokenizer, context))
    checkpoint = Checkpoint.from_model(model, context, FULL, tokenizer).save(tmp_path / "model.pt")

    lines = sessions[0].lines
    stream = tmp_path / "chat.jsonl"
    _chat.write_jsonl(stream, [chat_line_to_record(lines[0]), chat_line_to_record(lines[2])])
    out = tmp_path / "preds.jsonl"
    assert _help.run(f"predict {checkpoint} -i {stream} --output {out}") == 3
    # the line before the gap was already written
    assert len(out.read_text().splitlines()) == 1

    in_order = tmp_path / "ordered.jsonl"
    write_sessions(sessions, in_order)
    assert _help.run(f"predict {checkpoint} -i {in_order} --output {out}") == 0
    records = [json.loads(r) for r in out.read_text().splitlines()]
    assert [r["line_index"] for r in records] == [0, 1, 2, 3]
