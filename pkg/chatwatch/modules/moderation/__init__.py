from .flags import (
    DEFAULT_MIN_AVG_FLAGGED,
    PlayerFlagStats,
    PlayerRoster,
    flag_lines,
    flag_rate_by_report_count,
    flagged_players,
    player_flag_stats,
    proactive_candidates,
)
from .moderation_errors import NotificationFailure, ReportSetError, UnknownPlayerError
from .notifier import Notifier, send_report
from .pipeline import ModerationBlock, moderate, render_summary
from .report_sets import (
    RATIO_NAMES,
    UNDEFINED,
    ReportFile,
    ReportSets,
    load_report_file,
    moderation_report,
    parse_report_file,
    ratio_rows,
    render_ratios,
)

__all__ = [
    "DEFAULT_MIN_AVG_FLAGGED",
    "PlayerFlagStats",
    "PlayerRoster",
    "flag_lines",
    "flag_rate_by_report_count",
    "flagged_players",
    "player_flag_stats",
    "proactive_candidates",
    "NotificationFailure",
    "ReportSetError",
    "UnknownPlayerError",
    "Notifier",
    "send_report",
    "ModerationBlock",
    "moderate",
    "render_summary",
    "RATIO_NAMES",
    "UNDEFINED",
    "ReportFile",
    "ReportSets",
    "load_report_file",
    "moderation_report",
    "parse_report_file",
    "ratio_rows",
    "render_ratios",
]
