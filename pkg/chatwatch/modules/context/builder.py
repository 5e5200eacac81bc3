from dataclasses import dataclass
from enum import Enum
from typing import List, Optional, Protocol, Tuple, Union

from chatwatch.modules.chat import ChatLine, MatchSession

from .context_errors import RelativeIdOverflow, UnknownMetadataMode
from .relative_ids import RelativeIds, assign_relative_ids
from .scopes import Scope, select_history
from .truncation import truncate_pair

DEFAULT_MAX_TOKENS = 512
MAX_TOKEN_CHOICES = (64, 128, 256, 512)


class MetadataMode(Enum):
    SPEAKER_SEGMENTATION = "speaker-segmentation"
    IN_LINE = "in-line"
    NONE = "none"

    @classmethod
    def parse(cls, mode: Union[str, "MetadataMode"]) -> "MetadataMode":
        if isinstance(mode, MetadataMode):
            return mode
        try:
            return cls(str(mode).lower().replace("_", "-"))
        except ValueError:
            raise UnknownMetadataMode(mode) from None


class TokenizerLike(Protocol):
    cls_id: int
    sep_id: int

    def encode(self, text: str) -> List[int]: ...

    def marker_id(self, marker: str) -> int: ...


@dataclass(frozen=True)
class TrackSizes:
    """
    Number of real ids per metadata track. Each track reserves one extra
    neutral index equal to its size.
    """

    n_teams: int = 2
    n_players: int = 10

    @property
    def team_neutral(self) -> int:
        return self.n_teams

    @property
    def chat_type_neutral(self) -> int:
        return 2

    @property
    def player_neutral(self) -> int:
        return self.n_players

    @property
    def team_vocab(self) -> int:
        return self.n_teams + 1

    @property
    def chat_type_vocab(self) -> int:
        return 3

    @property
    def player_vocab(self) -> int:
        return self.n_players + 1


@dataclass(frozen=True)
class EncodedSequence:
    """
    Parallel per-token tracks of one model input.

    ``current_line_span`` is the ``[start, end)`` range of the current line's
    text tokens kept after truncation; ``loss_mask`` is true exactly there.
    """

    token_ids: Tuple[int, ...]
    positions: Tuple[int, ...]
    team_track: Tuple[int, ...]
    chat_type_track: Tuple[int, ...]
    player_track: Tuple[int, ...]
    loss_mask: Tuple[bool, ...]
    current_line_span: Tuple[int, int]
    history_lines: int = 0

    def __len__(self) -> int:
        return len(self.token_ids)

    @property
    def kept_text_tokens(self) -> int:
        return self.current_line_span[1] - self.current_line_span[0]


# (token_id, team, chat_type, player, is_current_text)
_Slot = Tuple[int, int, int, int, bool]


def _line_meta(
    line: ChatLine,
    rel: Optional[RelativeIds],
    sizes: TrackSizes,
    mode: MetadataMode,
    unbounded: bool,
) -> Tuple[int, int, int]:
    if mode is not MetadataMode.SPEAKER_SEGMENTATION or rel is None:
        return (sizes.team_neutral, sizes.chat_type_neutral, sizes.player_neutral)
    return (
        _fit(rel.team_rel[line.team_key], sizes.n_teams, unbounded, line, "team"),
        line.chat_type.track_id,
        _fit(rel.player_rel[line.player_key], sizes.n_players, unbounded, line, "player"),
    )


def _fit(value: int, size: int, unbounded: bool, line: ChatLine, track: str) -> int:
    if value < size:
        return value
    if unbounded:
        # documents without a roster fold late speakers into the last slot
        return size - 1
    raise RelativeIdOverflow(
        line.match_id, f"{track} id {value} does not fit a track of size {size}"
    )


def _markers(
    line: ChatLine,
    rel: RelativeIds,
    sizes: TrackSizes,
    tokenizer: TokenizerLike,
    unbounded: bool,
) -> List[int]:
    player = _fit(rel.player_rel[line.player_key], sizes.n_players, unbounded, line, "player")
    team = _fit(rel.team_rel[line.team_key], sizes.n_teams, unbounded, line, "team")
    return [
        tokenizer.marker_id(f"[p{player}]"),
        tokenizer.marker_id(f"[t{team}]"),
        tokenizer.marker_id(f"[{line.chat_type.value}]"),
    ]


def build_input(
    s: MatchSession,
    target: int,
    scope: Scope,
    tokenizer: TokenizerLike,
    max_tokens: int = DEFAULT_MAX_TOKENS,
    metadata_mode: Union[str, MetadataMode] = MetadataMode.SPEAKER_SEGMENTATION,
    track_sizes: Optional[TrackSizes] = None,
) -> EncodedSequence:
    """
    Assemble ``[CLS] history_1 [SEP] ... history_n [SEP] current [SEP]`` for
    line ``target`` and fill the metadata tracks.

    Parameters
    ----------
    s : MatchSession
        The match holding the line.
    target : int
        Index of the line to classify.
    scope : Scope
        History visibility rule.
    tokenizer : TokenizerLike
        Supplies token ids, ``[CLS]``/``[SEP]`` and in-line marker ids.
    max_tokens : int, optional
        Sequence length bound, by default 512.
    metadata_mode : str | MetadataMode, optional
        ``speaker-segmentation`` fills the team/chat-type/player tracks with
        relative ids; ``in-line`` prefixes each line with ``[p<k>] [t<k>]
        [team|all]`` marker tokens and leaves the tracks neutral; ``none``
        leaves the tracks neutral.
    track_sizes : Optional[TrackSizes], optional
        Metadata track bounds; derived from the session roster when omitted.

    Returns
    -------
    EncodedSequence
        History is truncated oldest-first, the current line on the right
        only when no history remains. In ``in-line`` mode the current line
        loses its markers when it would not fit with them, so its text
        keeps the same budget in every mode.
    """
    mode = MetadataMode.parse(metadata_mode)
    if max_tokens < 3:
        raise ValueError(f"max_tokens must leave room for [CLS] and [SEP]: {max_tokens}")

    unbounded = s.team_size is None
    if track_sizes is None:
        n_players = s.max_players if s.max_players is not None else max(len(s.player_keys), 1)
        track_sizes = TrackSizes(n_teams=s.num_teams, n_players=n_players)

    history = select_history(s, target, scope)
    current = s.lines[target]
    rel = assign_relative_ids(s, target) if mode is not MetadataMode.NONE else None

    def marker_slots(line: ChatLine) -> List[_Slot]:
        if mode is not MetadataMode.IN_LINE or rel is None:
            return []
        team, chat_type, player = _line_meta(line, rel, track_sizes, mode, unbounded)
        return [
            (m, team, chat_type, player, False)
            for m in _markers(line, rel, track_sizes, tokenizer, unbounded)
        ]

    def text_slots(line: ChatLine, is_current: bool) -> List[_Slot]:
        team, chat_type, player = _line_meta(line, rel, track_sizes, mode, unbounded)
        return [(t, team, chat_type, player, is_current) for t in tokenizer.encode(line.text)]

    history_slots: List[_Slot] = []
    for line in history:
        history_slots.extend(marker_slots(line) + text_slots(line, False))
        team, chat_type, player = _line_meta(line, rel, track_sizes, mode, unbounded)
        history_slots.append((tokenizer.sep_id, team, chat_type, player, False))

    budget = max_tokens - 2
    current_text = text_slots(current, True)
    current_markers = marker_slots(current)
    # the current line loses its markers before any of its text
    if len(current_markers) + len(current_text) > budget:
        current_markers = []
    kept_history, kept_current = truncate_pair(
        history_slots, current_markers + current_text, budget
    )

    cur_team, cur_ct, cur_player = _line_meta(current, rel, track_sizes, mode, unbounded)
    assembled: List[_Slot] = (
        [(tokenizer.cls_id, track_sizes.team_neutral, track_sizes.chat_type_neutral,
          track_sizes.player_neutral, False)]
        + kept_history
        + kept_current
        + [(tokenizer.sep_id, cur_team, cur_ct, cur_player, False)]
    )

    mask = tuple(slot[4] for slot in assembled)
    text_positions = [i for i, m in enumerate(mask) if m]
    start = 1 + len(kept_history) + (len(kept_current) - len(text_positions))
    span = (start, start + len(text_positions))

    return EncodedSequence(
        token_ids=tuple(slot[0] for slot in assembled),
        positions=tuple(range(len(assembled))),
        team_track=tuple(slot[1] for slot in assembled),
        chat_type_track=tuple(slot[2] for slot in assembled),
        player_track=tuple(slot[3] for slot in assembled),
        loss_mask=mask,
        current_line_span=span,
        history_lines=sum(1 for slot in kept_history if slot[0] == tokenizer.sep_id and not slot[4]),
    )


def count_separators(seq: EncodedSequence, sep_id: int) -> int:
    return sum(1 for t in seq.token_ids if t == sep_id)


def history_length(s: MatchSession, target: int, scope: Scope = Scope.MODERATOR) -> int:
    return len(select_history(s, target, scope))
