from dataclasses import dataclass, field, replace
from enum import Enum
from typing import Iterable, List, Optional, Tuple

from .taxonomy import ToxicClass


class ChatType(Enum):
    TEAM = "team"
    ALL = "all"

    @property
    def track_id(self) -> int:
        return 0 if self is ChatType.TEAM else 1


@dataclass(frozen=True)
class ChatLine:
    """
    One chat message with its raw speaker metadata.

    Parameters
    ----------
    match_id : str
        Opaque identifier of the match (or document) the line belongs to.
    line_index : int
        0-based chronological position within the match.
    player_key : str
        Raw in-game identity of the speaker.
    team_key : str
        Raw identifier of the speaker's team.
    chat_type : ChatType
        Whether the line went to the team channel or to all players.
    text : str
        The message text.
    token_labels : Optional[Tuple[ToxicClass, ...]], optional
        Gold class per token of ``text`` after tokenization, by default None
        (unlabeled).
    """

    match_id: str
    line_index: int
    player_key: str
    team_key: str
    chat_type: ChatType
    text: str
    token_labels: Optional[Tuple[ToxicClass, ...]] = None

    def with_labels(self, labels: Optional[Iterable[ToxicClass]]) -> "ChatLine":
        return replace(self, token_labels=None if labels is None else tuple(labels))

    @property
    def is_labeled(self) -> bool:
        return self.token_labels is not None


@dataclass(frozen=True)
class MatchSession:
    """
    The ordered chat lines of one match; the unit of context.

    ``team_size`` of ``None`` marks a document without a roster bound (a
    comment thread), in which case the player-count check is skipped.
    """

    match_id: str
    lines: Tuple[ChatLine, ...]
    team_size: Optional[int] = 5
    num_teams: int = 2

    def __len__(self) -> int:
        return len(self.lines)

    def __getitem__(self, index: int) -> ChatLine:
        return self.lines[index]

    @property
    def max_players(self) -> Optional[int]:
        if self.team_size is None:
            return None
        return self.num_teams * self.team_size

    @property
    def player_keys(self) -> List[str]:
        seen: List[str] = []
        for line in self.lines:
            if line.player_key not in seen:
                seen.append(line.player_key)
        return seen


@dataclass(frozen=True)
class LabeledToken:
    token_text: str
    toxic_class: ToxicClass
    score: float

    def __post_init__(self):
        if not 0.0 <= self.score <= 1.0:
            raise ValueError(f"Token score {self.score} outside [0, 1]")


@dataclass(frozen=True)
class LinePrediction:
    """Model output for one chat line."""

    match_id: str
    line_index: int
    player_key: str
    tokens: Tuple[LabeledToken, ...]
    line_class: ToxicClass
    score: float
    class_scores: Tuple[Tuple[ToxicClass, float], ...] = field(default=())
