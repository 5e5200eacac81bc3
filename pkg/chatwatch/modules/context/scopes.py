from enum import Enum
from typing import Callable, Dict, List

from chatwatch.modules.chat import ChatLine, ChatType, MatchSession


class Scope(Enum):
    """Which prior lines are visible as context; each scope contains the last."""

    NO_HISTORY = "no-history"
    PERSONAL = "personal"
    TEAM = "team"
    GLOBAL = "global"
    MODERATOR = "moderator"

    @classmethod
    def parse(cls, name: str) -> "Scope":
        try:
            return cls(name.lower().replace("_", "-"))
        except ValueError:
            options = ", ".join(s.value for s in cls)
            raise ValueError(f"Unknown scope {name!r}, choose from: {options}")


def _check_target(s: MatchSession, target: int) -> None:
    if not 0 <= target < len(s.lines):
        raise IndexError(
            f"target line {target} out of range for match {s.match_id} "
            f"with {len(s.lines)} lines"
        )


_VISIBLE: Dict[Scope, Callable[[ChatLine, ChatLine], bool]] = {
    Scope.NO_HISTORY: lambda line, cur: False,
    Scope.PERSONAL: lambda line, cur: line.player_key == cur.player_key,
    Scope.TEAM: lambda line, cur: (
        line.player_key == cur.player_key or line.team_key == cur.team_key
    ),
    Scope.GLOBAL: lambda line, cur: (
        line.player_key == cur.player_key
        or line.team_key == cur.team_key
        or line.chat_type is ChatType.ALL
    ),
    Scope.MODERATOR: lambda line, cur: True,
}


def select_history(s: MatchSession, target: int, scope: Scope) -> List[ChatLine]:
    """
    Prior lines of ``s`` visible from line ``target`` under ``scope``, in
    chronological order.

    Parameters
    ----------
    s : MatchSession
        The match.
    target : int
        Index of the line being classified.
    scope : Scope
        Visibility rule.

    Returns
    -------
    List[ChatLine]
        Lines before ``target`` that pass the scope filter.

    Raises
    ------
    IndexError
        If ``target`` is not a valid line position.
    """
    _check_target(s, target)
    current = s.lines[target]
    visible = _VISIBLE[scope]
    return [line for line in s.lines[:target] if visible(line, current)]
