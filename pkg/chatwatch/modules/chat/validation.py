from dataclasses import dataclass
from typing import Dict, List, Set

from .records import MatchSession


@dataclass(frozen=True)
class SessionViolation:
    code: str
    detail: str

    def __str__(self):
        return f"{self.code}: {self.detail}"


def validate_session(s: MatchSession) -> List[SessionViolation]:
    """
    Collect every invariant violation of ``s``. The session is valid iff the
    returned list is empty.

    Parameters
    ----------
    s : MatchSession
        The session to check.

    Returns
    -------
    List[SessionViolation]
        Index gaps, foreign lines, player-count overflow, players on more than
        one team, and teams beyond ``num_teams``.
    """
    violations: List[SessionViolation] = []

    indices = [line.line_index for line in s.lines]
    if indices != list(range(len(indices))):
        violations.append(
            SessionViolation(
                "non-contiguous line_index",
                f"expected 0..{len(indices) - 1}, got {indices}",
            )
        )

    foreign = sorted({ln.match_id for ln in s.lines if ln.match_id != s.match_id})
    if foreign:
        violations.append(
            SessionViolation("foreign lines", f"lines from matches {foreign}")
        )

    if s.num_teams < 1 or (s.team_size is not None and s.team_size < 1):
        violations.append(
            SessionViolation(
                "invalid roster",
                f"num_teams={s.num_teams}, team_size={s.team_size}",
            )
        )

    players = s.player_keys
    if s.max_players is not None and len(players) > s.max_players:
        violations.append(
            SessionViolation(
                "player count exceeds num_teams×team_size",
                f"{len(players)} players > {s.max_players}",
            )
        )

    teams_of: Dict[str, Set[str]] = {}
    for line in s.lines:
        teams_of.setdefault(line.player_key, set()).add(line.team_key)
    for player, teams in teams_of.items():
        if len(teams) > 1:
            violations.append(
                SessionViolation(
                    "team inconsistency",
                    f"player {player} appears on teams {sorted(teams)}",
                )
            )

    team_keys = {line.team_key for line in s.lines}
    if s.team_size is not None and len(team_keys) > s.num_teams:
        violations.append(
            SessionViolation(
                "team count exceeds num_teams",
                f"{len(team_keys)} teams > {s.num_teams}",
            )
        )

    return violations
