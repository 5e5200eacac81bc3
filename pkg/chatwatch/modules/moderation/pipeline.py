from dataclasses import dataclass
from typing import Any, Dict, List, Optional, Sequence

from chatwatch.cwlogger import logger
from chatwatch.modules.chat import LinePrediction

from .flags import (
    DEFAULT_MIN_AVG_FLAGGED,
    PlayerRoster,
    flag_lines,
    flag_rate_by_report_count,
    flagged_players,
    player_flag_stats,
    proactive_candidates,
)
from .report_sets import ReportFile, ReportSets, moderation_report, render_ratios


@dataclass(frozen=True)
class ModerationBlock:
    """Everything reported for one operating threshold."""

    target_precision: Optional[float]
    threshold: float
    flagged_lines: int
    flagged_players: int
    ratios: Dict[str, Optional[float]]
    proactive: List[str]
    flag_rate_by_reports: List[Dict[str, float]]

    def to_dict(self) -> Dict[str, Any]:
        reachable = self.threshold != float("inf")
        return {
            "target_precision": self.target_precision,
            "threshold": self.threshold if reachable else None,
            "flagged_lines": self.flagged_lines,
            "flagged_players": self.flagged_players,
            "ratios": render_ratios(self.ratios),
            "proactive_candidates": self.proactive,
            "flag_rate_by_chat_reports": self.flag_rate_by_reports,
        }


def moderate(
    predictions: Sequence[LinePrediction],
    report: ReportFile,
    threshold: float,
    target_precision: Optional[float] = None,
    min_avg_flagged: float = DEFAULT_MIN_AVG_FLAGGED,
) -> ModerationBlock:
    """Flag lines at ``threshold`` and cross-reference the flagged players
    with the report sets."""
    flags = flag_lines(predictions, threshold)
    stats = player_flag_stats(flags, PlayerRoster.from_predictions(predictions))
    flagged = flagged_players(stats)
    sets = ReportSets.build(report, flagged)
    candidates = proactive_candidates(stats, min_avg_flagged, exclude=report.chat_reported)
    logger.info(
        f"Threshold {threshold:.4f}: {len(flags)} flagged lines, {len(flagged)} flagged players, "
        f"{len(candidates)} proactive candidates"
    )
    return ModerationBlock(
        target_precision=target_precision,
        threshold=threshold,
        flagged_lines=len(flags),
        flagged_players=len(flagged),
        ratios=moderation_report(sets),
        proactive=sorted(candidates),
        flag_rate_by_reports=(
            flag_rate_by_report_count(stats, report.chat_report_counts)
            if report.chat_report_counts
            else []
        ),
    )


def render_summary(blocks: Sequence[ModerationBlock]) -> str:
    lines = []
    for b in blocks:
        label = f"precision {b.target_precision:g}" if b.target_precision else "threshold"
        lines.append(
            f"{label} (threshold {b.threshold:.4f}): {b.flagged_lines} flagged lines, "
            f"{b.flagged_players} flagged players"
        )
        for name, value in render_ratios(b.ratios).items():
            shown = value if isinstance(value, str) else f"{value:.1f}%"
            lines.append(f"  {name}: {shown}")
        if b.proactive:
            lines.append(f"  proactive: {', '.join(b.proactive)}")
    return "\n".join(lines)
