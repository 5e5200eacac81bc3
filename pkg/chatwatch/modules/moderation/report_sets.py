"""
Player report sets and the flagged-vs-reported ratios.

Report-sets file::

    {"players": [...], "chat_reported": [...], "reported": [...],
     "chat_report_counts": {"player": n, ...}}

``chat_report_counts`` is optional.
"""

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, FrozenSet, Iterable, List, Mapping, Optional, Tuple, Union

from .moderation_errors import ReportSetError, UnknownPlayerError

UNDEFINED = "undefined"
RATIO_NAMES = ("F/P", "(F∩CR)/CR", "(F∩¬CR)/¬CR", "(F∩R)/R", "(F∩¬R)/¬R")


@dataclass(frozen=True)
class ReportFile:
    players: FrozenSet[str]
    chat_reported: FrozenSet[str]
    reported: FrozenSet[str]
    chat_report_counts: Mapping[str, int] = field(default_factory=dict)


def _players(payload: Mapping[str, Any], key: str) -> FrozenSet[str]:
    value = payload.get(key, [])
    if not isinstance(value, list):
        raise ReportSetError(f"{key} must be a list")
    return frozenset(str(v) for v in value)


def parse_report_file(payload: Mapping[str, Any]) -> ReportFile:
    if not isinstance(payload, Mapping) or "players" not in payload:
        raise ReportSetError("missing players list")
    counts = payload.get("chat_report_counts") or {}
    if not isinstance(counts, Mapping):
        raise ReportSetError("chat_report_counts must be an object")
    try:
        parsed_counts = {str(k): int(v) for k, v in counts.items()}
    except (TypeError, ValueError):
        raise ReportSetError("chat_report_counts values must be integers") from None
    return ReportFile(
        players=_players(payload, "players"),
        chat_reported=_players(payload, "chat_reported"),
        reported=_players(payload, "reported"),
        chat_report_counts=parsed_counts,
    )


def load_report_file(path: Union[str, Path]) -> ReportFile:
    with open(path, encoding="utf-8") as f:
        try:
            payload = json.load(f)
        except json.JSONDecodeError as e:
            raise ReportSetError(f"{path}: invalid JSON ({e.msg})") from None
    return parse_report_file(payload)


@dataclass(frozen=True)
class ReportSets:
    """
    F (flagged), CR (chat-reported) and R (reported for any reason), all
    subsets of the player population P.
    """

    players: FrozenSet[str]
    flagged: FrozenSet[str]
    chat_reported: FrozenSet[str]
    reported: FrozenSet[str]

    def __post_init__(self):
        for name in ("flagged", "chat_reported", "reported"):
            outside = getattr(self, name) - self.players
            if outside:
                first = sorted(outside)[0]
                if name == "flagged":
                    raise UnknownPlayerError(first, "flagged but not in players")
                raise ReportSetError(f"{name} holds {first}, who is not in players")

    @classmethod
    def build(cls, report: ReportFile, flagged: Iterable[str]) -> "ReportSets":
        return cls(
            players=report.players,
            flagged=frozenset(flagged),
            chat_reported=report.chat_reported,
            reported=report.reported,
        )


def _percent(numerator: FrozenSet[str], denominator: FrozenSet[str]) -> Optional[float]:
    if not denominator:
        return None
    return 100.0 * len(numerator) / len(denominator)


def moderation_report(sets: ReportSets) -> Dict[str, Optional[float]]:
    """
    The five flagged-share ratios in percent, complements taken within P.
    An empty denominator gives ``None``.
    """
    f, p = sets.flagged, sets.players
    cr, r = sets.chat_reported, sets.reported
    not_cr, not_r = p - cr, p - r
    values = (
        _percent(f, p),
        _percent(f & cr, cr),
        _percent(f & not_cr, not_cr),
        _percent(f & r, r),
        _percent(f & not_r, not_r),
    )
    return dict(zip(RATIO_NAMES, values))


def render_ratios(ratios: Mapping[str, Optional[float]]) -> Dict[str, Union[float, str]]:
    return {k: UNDEFINED if v is None else round(v, 4) for k, v in ratios.items()}


def ratio_rows(blocks: Iterable[Tuple[float, Mapping[str, Optional[float]]]]) -> List[Dict[str, Any]]:
    """Rows shaped like a table with one column per precision level."""
    blocks = list(blocks)
    return [
        {"ratio": name, **{f"{100 * p:g}%": ratios[name] for p, ratios in blocks}}
        for name in RATIO_NAMES
    ]
