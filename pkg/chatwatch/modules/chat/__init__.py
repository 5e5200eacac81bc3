from .chat_errors import ChatRecordError, EmptyLineError, SessionError
from .jsonl import (
    chat_line_to_record,
    group_sessions,
    iter_json_records,
    parse_chat_record,
    parse_prediction_record,
    prediction_to_record,
    read_chat_lines,
    read_predictions,
    read_sessions,
    write_chat_lines,
    write_sessions,
)
from .records import ChatLine, ChatType, LabeledToken, LinePrediction, MatchSession
from .taxonomy import (
    BINARY,
    DOTA,
    FULL,
    LABEL_SPACES,
    LabelSpace,
    ToxicClass,
    get_label_space,
    line_class_from_tokens,
    most_severe,
    severity_rank,
)
from .validation import SessionViolation, validate_session

__all__ = [
    "ChatRecordError",
    "EmptyLineError",
    "SessionError",
    "chat_line_to_record",
    "group_sessions",
    "iter_json_records",
    "parse_chat_record",
    "parse_prediction_record",
    "prediction_to_record",
    "read_chat_lines",
    "read_predictions",
    "read_sessions",
    "write_chat_lines",
    "write_sessions",
    "ChatLine",
    "ChatType",
    "LabeledToken",
    "LinePrediction",
    "MatchSession",
    "BINARY",
    "DOTA",
    "FULL",
    "LABEL_SPACES",
    "LabelSpace",
    "ToxicClass",
    "get_label_space",
    "line_class_from_tokens",
    "most_severe",
    "severity_rank",
    "SessionViolation",
    "validate_session",
]
