"""
JSONL codec for chat lines: one ChatLine per line with the schema

    {"match_id": str, "line_index": int, "player_key": str, "team_key": str,
     "chat_type": "team"|"all", "text": str, "token_labels": [str]|null}
"""

import json
from pathlib import Path
from typing import IO, Any, Dict, Iterable, Iterator, List, Optional, Union

from .chat_errors import ChatRecordError, SessionError
from .records import ChatLine, ChatType, LabeledToken, LinePrediction, MatchSession
from .taxonomy import ToxicClass
from .validation import validate_session

REQUIRED_FIELDS = ("match_id", "line_index", "player_key", "team_key", "chat_type")


def parse_chat_record(
    record: Dict[str, Any], source: Optional[str] = None, row: int = 0
) -> ChatLine:
    missing = [k for k in REQUIRED_FIELDS + ("text",) if k not in record]
    if missing:
        raise ChatRecordError(f"missing fields {missing}", source, row)

    try:
        chat_type = ChatType(str(record["chat_type"]).lower())
    except ValueError:
        raise ChatRecordError(
            f"chat_type must be 'team' or 'all', got {record['chat_type']!r}",
            source,
            row,
        ) from None

    labels = record.get("token_labels")
    try:
        token_labels = (
            None if labels is None else tuple(ToxicClass.parse(x) for x in labels)
        )
    except ValueError as e:
        raise ChatRecordError(str(e), source, row) from None

    line_index = record["line_index"]
    if not isinstance(line_index, int) or isinstance(line_index, bool):
        raise ChatRecordError(f"line_index must be an int: {line_index!r}", source, row)

    return ChatLine(
        match_id=str(record["match_id"]),
        line_index=line_index,
        player_key=str(record["player_key"]),
        team_key=str(record["team_key"]),
        chat_type=chat_type,
        text=str(record["text"]),
        token_labels=token_labels,
    )


def chat_line_to_record(line: ChatLine) -> Dict[str, Any]:
    return {
        "match_id": line.match_id,
        "line_index": line.line_index,
        "player_key": line.player_key,
        "team_key": line.team_key,
        "chat_type": line.chat_type.value,
        "text": line.text,
        "token_labels": (
            None
            if line.token_labels is None
            else [c.value for c in line.token_labels]
        ),
    }


def iter_json_records(stream: IO[str], source: str = "<stream>") -> Iterator[Dict]:
    for row, raw in enumerate(stream, start=1):
        raw = raw.strip()
        if not raw:
            continue
        try:
            record = json.loads(raw)
        except json.JSONDecodeError as e:
            raise ChatRecordError(f"invalid JSON ({e.msg})", source, row) from None
        if not isinstance(record, dict):
            raise ChatRecordError("each line must be a JSON object", source, row)
        yield record


def read_chat_lines(path: Union[str, Path]) -> List[ChatLine]:
    path = Path(path)
    with open(path, "r", encoding="utf-8") as f:
        return [
            parse_chat_record(rec, str(path), row)
            for row, rec in enumerate(iter_json_records(f, str(path)), start=1)
        ]


def write_chat_lines(lines: Iterable[ChatLine], path: Union[str, Path]) -> int:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    n = 0
    with open(path, "w", encoding="utf-8") as f:
        for line in lines:
            f.write(json.dumps(chat_line_to_record(line), ensure_ascii=False))
            f.write("\n")
            n += 1
    return n


def group_sessions(
    lines: Iterable[ChatLine], team_size: Optional[int] = 5, num_teams: int = 2
) -> List[MatchSession]:
    """
    Group lines by match_id (first-seen order) and sort each by line_index.

    Raises
    ------
    SessionError
        If a grouped session has index gaps, a player on two teams, or more
        players or teams than the roster allows.
    """
    grouped: Dict[str, List[ChatLine]] = {}
    for line in lines:
        grouped.setdefault(line.match_id, []).append(line)
    sessions = [
        MatchSession(
            match_id=match_id,
            lines=tuple(sorted(match_lines, key=lambda ln: ln.line_index)),
            team_size=team_size,
            num_teams=num_teams,
        )
        for match_id, match_lines in grouped.items()
    ]
    for s in sessions:
        violations = validate_session(s)
        if violations:
            raise SessionError(s.match_id, violations)
    return sessions


def read_sessions(
    path: Union[str, Path], team_size: Optional[int] = 5, num_teams: int = 2
) -> List[MatchSession]:
    return group_sessions(read_chat_lines(path), team_size, num_teams)


def write_sessions(sessions: Iterable[MatchSession], path: Union[str, Path]) -> int:
    return write_chat_lines((ln for s in sessions for ln in s.lines), path)


SCORE_DIGITS = 6


def prediction_to_record(p: LinePrediction) -> Dict[str, Any]:
    """Output record of the prediction stream; scores rounded for stable bytes."""
    return {
        "match_id": p.match_id,
        "line_index": p.line_index,
        "player_key": p.player_key,
        "line_class": p.line_class.value,
        "score": round(p.score, SCORE_DIGITS),
        "class_scores": {c.value: round(s, SCORE_DIGITS) for c, s in p.class_scores},
        "tokens": [
            {
                "text": t.token_text,
                "class": t.toxic_class.value,
                "score": round(t.score, SCORE_DIGITS),
            }
            for t in p.tokens
        ],
    }


def parse_prediction_record(
    record: Dict[str, Any], source: Optional[str] = None, row: int = 0
) -> LinePrediction:
    try:
        return LinePrediction(
            match_id=str(record["match_id"]),
            line_index=int(record["line_index"]),
            player_key=str(record["player_key"]),
            tokens=tuple(
                LabeledToken(str(t["text"]), ToxicClass.parse(t["class"]), float(t["score"]))
                for t in record.get("tokens", [])
            ),
            line_class=ToxicClass.parse(record["line_class"]),
            score=float(record["score"]),
            class_scores=tuple(
                (ToxicClass.parse(c), float(s))
                for c, s in (record.get("class_scores") or {}).items()
            ),
        )
    except (KeyError, TypeError, ValueError) as e:
        raise ChatRecordError(f"malformed prediction ({e})", source, row) from None


def read_predictions(path: Union[str, Path]) -> List[LinePrediction]:
    path = Path(path)
    with open(path, "r", encoding="utf-8") as f:
        return [
            parse_prediction_record(rec, str(path), row)
            for row, rec in enumerate(iter_json_records(f, str(path)), start=1)
        ]
