from dataclasses import replace

import _chat_helpers as _help
import numpy as np
import pytest

from chatwatch.modules.chat import ChatType, MatchSession
from chatwatch.modules.context import (
    MAX_TOKEN_CHOICES,
    ContextConfig,
    MetadataMode,
    RelativeIdOverflow,
    Scope,
    TrackSizes,
    UnknownMetadataMode,
    assign_relative_ids,
    build_input,
    count_separators,
    history_length,
    select_history,
    truncate_pair,
)
from chatwatch.modules.model import Tokenizer

TARGET = _help.FRUIT_TARGET
EXPECTED_HISTORY = {
    Scope.NO_HISTORY: [],
    Scope.PERSONAL: [3],
    Scope.TEAM: [2, 3],
    Scope.GLOBAL: [1, 2, 3],
    Scope.MODERATOR: [0, 1, 2, 3],
}
SCOPE_ORDER = [Scope.NO_HISTORY, Scope.PERSONAL, Scope.TEAM, Scope.GLOBAL, Scope.MODERATOR]


@pytest.fixture
def fruit():
    return _help.fruit_session()


@pytest.fixture
def fruit_tokenizer(fruit):
    return Tokenizer.build([ln.text for ln in fruit.lines])


def test_fruit_history_per_scope(fruit):
    for scope, expected in EXPECTED_HISTORY.items():
        history = select_history(fruit, TARGET, scope)
        assert [ln.line_index for ln in history] == expected, scope


def test_fruit_relative_ids(fruit):
    rel = assign_relative_ids(fruit, TARGET)
    assert dict(rel.player_rel) == {"Orange": 0, "Grape": 1, "Banana": 5, "Apple": 6}
    assert dict(rel.team_rel) == {"fruit-b": 0, "fruit-a": 1}


def test_scopes_are_nested():
    rng = np.random.default_rng(7)
    for trial in range(20):
        s = _help.random_session(rng, 25, match_id=f"m{trial}")
        for target in range(len(s.lines)):
            previous = set()
            for scope in SCOPE_ORDER:
                current = {ln.line_index for ln in select_history(s, target, scope)}
                assert previous <= current
                assert all(i < target for i in current)
                previous = current


def test_select_history_target_out_of_range(fruit):
    with pytest.raises(IndexError):
        select_history(fruit, 5, Scope.GLOBAL)


def test_scope_parse():
    assert Scope.parse("no_history") is Scope.NO_HISTORY
    assert Scope.parse("Global") is Scope.GLOBAL
    with pytest.raises(ValueError):
        Scope.parse("everyone")


def test_relative_ids_recency_and_silent_players():
    lines = (
        _help.line(0, "b", "t0"),
        _help.line(1, "c", "t0"),
        _help.line(2, "x", "t1"),
        _help.line(3, "a", "t0"),
        _help.line(4, "y", "t1"),
        _help.line(5, "d", "t0"),
    )
    s = MatchSession("m0", lines)
    rel = assign_relative_ids(s, 3)
    # c spoke more recently than b before line 3; d has not spoken yet
    assert rel.player_rel["a"] == 0
    assert rel.player_rel["c"] == 1
    assert rel.player_rel["b"] == 2
    assert rel.player_rel["d"] == 3
    assert rel.player_rel["x"] == 5
    assert rel.player_rel["y"] == 6


def test_relative_ids_bijection():
    rng = np.random.default_rng(3)
    for trial in range(20):
        s = _help.random_session(rng, 30, match_id=f"m{trial}")
        for target in range(len(s.lines)):
            rel = assign_relative_ids(s, target)
            ids = list(rel.player_rel.values())
            assert len(ids) == len(set(ids))
            assert rel.player_rel[s.lines[target].player_key] == 0
            assert rel.team_rel[s.lines[target].team_key] == 0
            for player, rid in rel.player_rel.items():
                team_id = rel.team_rel[next(ln.team_key for ln in s.lines if ln.player_key == player)]
                assert rid // s.team_size == team_id


@pytest.mark.parametrize("mode", list(MetadataMode))
def test_build_input_ignores_key_names(mode):
    rng = np.random.default_rng(4)
    s = _help.random_session(rng, 25)
    renamed = MatchSession(
        s.match_id,
        tuple(
            replace(ln, player_key=f"player-{ln.player_key[::-1]}", team_key=f"side {ln.team_key}!")
            for ln in s.lines
        ),
        s.team_size,
        s.num_teams,
    )
    tok = _help.tokenizer_for([s])
    for target in range(len(s.lines)):
        for scope in SCOPE_ORDER:
            assert build_input(s, target, scope, tok, 64, mode) == build_input(
                renamed, target, scope, tok, 64, mode
            )


def test_relative_ids_overflow():
    lines = tuple(_help.line(i, f"p{i}", "t0") for i in range(3))
    with pytest.raises(RelativeIdOverflow):
        assign_relative_ids(MatchSession("m0", lines, team_size=2, num_teams=2), 0)


def _reference_truncate(history, current, n):
    history, current = list(history), list(current)
    while len(history) + len(current) > n and history:
        history.pop(0)
    while len(current) > n:
        current.pop()
    return history, current


def test_truncation_matches_reference():
    rng = np.random.default_rng(11)
    for _ in range(1000):
        history = list(range(int(rng.integers(0, 40))))
        current = list(range(100, 100 + int(rng.integers(0, 40))))
        n = int(rng.integers(1, 60))
        assert truncate_pair(history, current, n) == _reference_truncate(history, current, n)


def test_truncation_rejects_zero_budget():
    with pytest.raises(ValueError):
        truncate_pair([1], [2], 0)


def test_build_input_layout(fruit, fruit_tokenizer):
    seq = build_input(fruit, TARGET, Scope.GLOBAL, fruit_tokenizer)
    tok = fruit_tokenizer
    expected = (
        [tok.cls_id]
        + tok.encode("Hf") + [tok.sep_id]
        + tok.encode("Which site?") + [tok.sep_id]
        + tok.encode("A") + [tok.sep_id]
        + tok.encode("Glhf") + [tok.sep_id]
    )
    assert list(seq.token_ids) == expected
    assert count_separators(seq, tok.sep_id) == 4
    assert seq.history_lines == 3
    assert seq.positions == tuple(range(len(expected)))
    start, end = seq.current_line_span
    assert (start, end) == (len(expected) - 2, len(expected) - 1)
    assert [i for i, m in enumerate(seq.loss_mask) if m] == list(range(start, end))


def test_build_input_metadata_tracks(fruit, fruit_tokenizer):
    seq = build_input(fruit, TARGET, Scope.MODERATOR, fruit_tokenizer)
    sizes = TrackSizes(n_teams=2, n_players=10)
    # [CLS] is neutral on every track
    assert (seq.team_track[0], seq.chat_type_track[0], seq.player_track[0]) == (
        sizes.team_neutral,
        sizes.chat_type_neutral,
        sizes.player_neutral,
    )
    # Apple's "Hf" and its [SEP]
    assert seq.player_track[1:3] == (6, 6)
    assert seq.team_track[1:3] == (1, 1)
    assert seq.chat_type_track[1] == ChatType.TEAM.track_id
    # Banana's all-chat line
    assert seq.player_track[3] == 5
    assert seq.chat_type_track[3] == ChatType.ALL.track_id
    start, _ = seq.current_line_span
    assert seq.player_track[start] == 0
    assert seq.team_track[start] == 0


def test_build_input_without_metadata(fruit, fruit_tokenizer):
    seq = build_input(fruit, TARGET, Scope.MODERATOR, fruit_tokenizer, metadata_mode="none")
    assert set(seq.team_track) == {2}
    assert set(seq.chat_type_track) == {2}
    assert set(seq.player_track) == {10}


def test_build_input_in_line_markers(fruit, fruit_tokenizer):
    tok = fruit_tokenizer
    seq = build_input(fruit, TARGET, Scope.PERSONAL, tok, metadata_mode=MetadataMode.IN_LINE)
    markers = tok.convert_tokens_to_ids(["[p0]", "[t0]", "[team]"])
    current = tok.convert_tokens_to_ids(["[p0]", "[t0]", "[all]"])
    expected = (
        [tok.cls_id] + markers + tok.encode("A") + [tok.sep_id]
        + current + tok.encode("Glhf") + [tok.sep_id]
    )
    assert list(seq.token_ids) == expected
    # markers are not supervised
    assert seq.kept_text_tokens == 1
    assert set(seq.player_track) == {10}


def test_unknown_metadata_mode(fruit, fruit_tokenizer):
    with pytest.raises(UnknownMetadataMode):
        build_input(fruit, TARGET, Scope.GLOBAL, fruit_tokenizer, metadata_mode="emoji")


def test_build_input_respects_max_tokens():
    rng = np.random.default_rng(5)
    s = _help.random_session(rng, 40)
    tok = _help.tokenizer_for([s])
    for max_tokens in (3, 8, 16, 64):
        for target in range(len(s.lines)):
            seq = build_input(s, target, Scope.MODERATOR, tok, max_tokens=max_tokens)
            assert len(seq) <= max_tokens
            assert seq.token_ids[0] == tok.cls_id
            assert seq.token_ids[-1] == tok.sep_id
            start, end = seq.current_line_span
            # the current line is only cut once the history is gone
            if end - start < tok.count(s.lines[target].text):
                assert start == 1


@pytest.mark.parametrize("mode", list(MetadataMode))
def test_current_line_kept_whole_when_it_fits(mode):
    rng = np.random.default_rng(6)
    s = _help.random_session(rng, 30)
    tok = _help.tokenizer_for([s])
    for target in range(len(s.lines)):
        n = tok.count(s.lines[target].text)
        for max_tokens in (n + 2, n + 3, n + 6):
            seq = build_input(s, target, Scope.MODERATOR, tok, max_tokens, mode)
            assert len(seq) <= max_tokens
            assert seq.kept_text_tokens == n


def test_in_line_markers_dropped_before_text(fruit, fruit_tokenizer):
    n = fruit_tokenizer.count("Glhf")
    seq = build_input(
        fruit, TARGET, Scope.PERSONAL, fruit_tokenizer, n + 2, MetadataMode.IN_LINE
    )
    assert list(seq.token_ids) == (
        [fruit_tokenizer.cls_id] + fruit_tokenizer.encode("Glhf") + [fruit_tokenizer.sep_id]
    )


def test_history_is_dropped_oldest_first():
    lines = tuple(
        _help.line(i, "p0", "t0", text=f"w{i} w{i} w{i}") for i in range(6)
    )
    s = MatchSession("m0", lines)
    tok = _help.tokenizer_for([s])
    seq = build_input(s, 5, Scope.MODERATOR, tok, max_tokens=2 + 3 + 4 * 2)
    words = tok.convert_ids_to_tokens(seq.token_ids)
    assert "w0" not in words and "w4" in words
    assert words[-4:-1] == ["w5", "w5", "w5"]


def test_history_length_counts_visible_lines(fruit):
    assert history_length(fruit, TARGET) == 4
    assert history_length(fruit, TARGET, Scope.TEAM) == 2
    assert history_length(fruit, 0) == 0


def test_context_config_from_dict():
    config = ContextConfig.from_dict({"scope": "team", "metadata_mode": "in_line", "max_tokens": 64})
    assert config.scope is Scope.TEAM
    assert config.metadata_mode is MetadataMode.IN_LINE
    assert ContextConfig.from_dict(config.to_dict()) == config
    with pytest.raises(ValueError):
        ContextConfig(max_tokens=2)
    with pytest.raises(ValueError, match="max_tokens"):
        ContextConfig(max_tokens=100)
    assert [ContextConfig(max_tokens=n).max_tokens for n in MAX_TOKEN_CHOICES] == [64, 128, 256, 512]
