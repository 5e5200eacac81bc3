"""Line flagging at an operating threshold and per-player flag statistics."""

from collections import defaultdict
from dataclasses import dataclass, field
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Set, Tuple, Union

from chatwatch.modules.chat import LinePrediction, MatchSession

from .moderation_errors import UnknownPlayerError

LineRef = Tuple[str, int]
DEFAULT_MIN_AVG_FLAGGED = 5.0


def flag_lines(predictions: Iterable[LinePrediction], threshold: float) -> Set[LineRef]:
    """Lines whose toxic-score is at or above ``threshold``."""
    return {(p.match_id, p.line_index) for p in predictions if p.score >= threshold}


@dataclass
class PlayerRoster:
    """Who spoke each line and which matches each player took part in."""

    speakers: Dict[LineRef, str] = field(default_factory=dict)
    matches: Dict[str, Set[str]] = field(default_factory=lambda: defaultdict(set))

    def add(self, match_id: str, line_index: int, player_key: str) -> None:
        self.speakers[(match_id, line_index)] = player_key
        self.matches[player_key].add(match_id)

    @classmethod
    def from_sessions(cls, sessions: Iterable[MatchSession]) -> "PlayerRoster":
        roster = cls()
        for s in sessions:
            for line in s.lines:
                roster.add(line.match_id, line.line_index, line.player_key)
        return roster

    @classmethod
    def from_predictions(cls, predictions: Iterable[LinePrediction]) -> "PlayerRoster":
        roster = cls()
        for p in predictions:
            roster.add(p.match_id, p.line_index, p.player_key)
        return roster

    @property
    def players(self) -> Set[str]:
        return set(self.matches)


@dataclass(frozen=True)
class PlayerFlagStats:
    player_key: str
    matches_played: int
    flagged_per_match: Mapping[str, int]

    @property
    def flagged_lines(self) -> int:
        return sum(self.flagged_per_match.values())

    @property
    def avg_flagged_per_match(self) -> float:
        if self.matches_played == 0:
            return 0.0
        return self.flagged_lines / self.matches_played


def player_flag_stats(
    flags: Iterable[LineRef], sessions: Union[Sequence[MatchSession], PlayerRoster]
) -> Dict[str, PlayerFlagStats]:
    """
    Flag totals and per-match averages for every player of ``sessions``,
    including players with no flag.

    Raises
    ------
    UnknownPlayerError
        If a flag points at a line the sessions do not contain.
    """
    roster = sessions if isinstance(sessions, PlayerRoster) else PlayerRoster.from_sessions(sessions)
    counts: Dict[str, Dict[str, int]] = defaultdict(lambda: defaultdict(int))
    for ref in flags:
        player = roster.speakers.get(ref)
        if player is None:
            raise UnknownPlayerError(f"at {ref[0]}#{ref[1]}", "flagged line not in any session")
        counts[player][ref[0]] += 1
    return {
        player: PlayerFlagStats(player, len(matches), dict(counts.get(player, {})))
        for player, matches in sorted(roster.matches.items())
    }


def flagged_players(stats: Mapping[str, PlayerFlagStats]) -> Set[str]:
    return {p for p, s in stats.items() if s.flagged_lines > 0}


def proactive_candidates(
    stats: Mapping[str, PlayerFlagStats],
    min_avg_flagged: float = DEFAULT_MIN_AVG_FLAGGED,
    exclude: Optional[Iterable[str]] = None,
) -> Set[str]:
    """Players outside ``exclude`` averaging at least ``min_avg_flagged``
    flagged lines per match."""
    excluded = set(exclude or ())
    return {
        p
        for p, s in stats.items()
        if p not in excluded and s.avg_flagged_per_match >= min_avg_flagged
    }


def flag_rate_by_report_count(
    stats: Mapping[str, PlayerFlagStats], chat_report_counts: Mapping[str, int]
) -> List[Dict[str, float]]:
    """Mean flagged lines per match of the players grouped by how often they
    were chat-reported (absent players count as 0)."""
    groups: Dict[int, List[float]] = defaultdict(list)
    for player, s in stats.items():
        groups[int(chat_report_counts.get(player, 0))].append(s.avg_flagged_per_match)
    return [
        {
            "chat_reports": n,
            "players": len(values),
            "avg_flagged_per_match": sum(values) / len(values),
        }
        for n, values in sorted(groups.items())
    ]
