from dataclasses import dataclass
from typing import Dict, List, Mapping

from chatwatch.modules.chat import MatchSession

from .context_errors import RelativeIdOverflow
from .scopes import _check_target


@dataclass(frozen=True)
class RelativeIds:
    """Player and team ids renumbered around the speaker of one line."""

    player_rel: Mapping[str, int]
    team_rel: Mapping[str, int]


def _by_recency(keys: List[str], last_seen: Dict[str, int]) -> List[str]:
    # most recent prior chat first; silent keys after, ordered by key
    return sorted(keys, key=lambda k: (-last_seen.get(k, -1), k))


def assign_relative_ids(s: MatchSession, target: int) -> RelativeIds:
    """
    Renumber players and teams relative to the speaker of line ``target``.

    The speaker and their team are always 0. Teammates take 1, 2, ... by
    recency of their last line before ``target``; each enemy team takes the
    next team id by the same recency rule and its players fill the block
    starting at ``team_id * team_size``. Players who have not chatted before
    ``target`` take the remaining slots of their block ordered by player key.
    Sessions without a roster bound (``team_size is None``) number every
    non-speaker consecutively in team order.

    Raises
    ------
    IndexError
        If ``target`` is out of range.
    RelativeIdOverflow
        If the roster exceeds ``num_teams`` teams or ``team_size`` players
        per team.
    """
    _check_target(s, target)
    speaker = s.lines[target]

    team_of: Dict[str, str] = {}
    for line in s.lines:
        team_of.setdefault(line.player_key, line.team_key)
    team_of[speaker.player_key] = speaker.team_key

    last_player: Dict[str, int] = {}
    last_team: Dict[str, int] = {}
    for i, line in enumerate(s.lines[:target]):
        last_player[line.player_key] = i
        last_team[line.team_key] = i

    teams = list(dict.fromkeys(team_of.values()))
    other_teams = _by_recency(
        [t for t in teams if t != speaker.team_key], last_team
    )
    team_rel = {speaker.team_key: 0}
    for k, team in enumerate(other_teams, start=1):
        team_rel[team] = k

    bounded = s.team_size is not None
    if bounded and len(team_rel) > s.num_teams:
        raise RelativeIdOverflow(
            s.match_id, f"{len(team_rel)} teams for num_teams={s.num_teams}"
        )
    if s.max_players is not None and len(team_of) > s.max_players:
        raise RelativeIdOverflow(
            s.match_id,
            f"{len(team_of)} players for num_teams×team_size={s.max_players}",
        )

    player_rel = {speaker.player_key: 0}
    next_free = 1
    for team, k in sorted(team_rel.items(), key=lambda kv: kv[1]):
        members = [
            p for p, t in team_of.items() if t == team and p != speaker.player_key
        ]
        ordered = _by_recency(members, last_player)
        if bounded:
            assert s.team_size is not None
            start = 1 if k == 0 else k * s.team_size
            capacity = s.team_size - (1 if k == 0 else 0)
            if len(ordered) > capacity:
                raise RelativeIdOverflow(
                    s.match_id,
                    f"team {team} has more than team_size={s.team_size} players",
                )
        else:
            start = next_free
        for i, player in enumerate(ordered):
            player_rel[player] = start + i
        next_free = start + len(ordered)

    return RelativeIds(player_rel=player_rel, team_rel=team_rel)
