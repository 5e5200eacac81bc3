from .eval_errors import MetricInputError, TransferError
from .metrics import (
    ClassMetrics,
    MetricsReport,
    MetricSummary,
    binary_weighted_prf,
    summarize_reports,
    to_binary,
    weighted_prf,
)
from .curves import (
    DEFAULT_PRECISIONS,
    NO_THRESHOLD,
    OperatingPoint,
    PRCurve,
    PRPoint,
    class_recall_at_threshold,
    intercept_rate,
    operating_points,
    per_class_curves,
    pr_curve,
    recall_at_precision,
)
from .cold_start import HISTORY_BINS, BinReport, history_bin, history_length_report
from .reports import (
    bins_table,
    metrics_table,
    per_class_table,
    records_table,
    to_json,
    write_curve_csv,
    write_json,
)
from .scoring import (
    ScoredLine,
    evaluate_scored,
    line_pairs,
    project_labels,
    score_sessions,
    token_pairs,
)
from .transfer import TransferMatrix, check_compatible, transfer_matrix

__all__ = [
    "MetricInputError",
    "TransferError",
    "ClassMetrics",
    "MetricsReport",
    "MetricSummary",
    "binary_weighted_prf",
    "summarize_reports",
    "to_binary",
    "weighted_prf",
    "DEFAULT_PRECISIONS",
    "NO_THRESHOLD",
    "OperatingPoint",
    "PRCurve",
    "PRPoint",
    "class_recall_at_threshold",
    "intercept_rate",
    "operating_points",
    "per_class_curves",
    "pr_curve",
    "recall_at_precision",
    "HISTORY_BINS",
    "BinReport",
    "history_bin",
    "history_length_report",
    "bins_table",
    "metrics_table",
    "per_class_table",
    "records_table",
    "to_json",
    "write_curve_csv",
    "write_json",
    "ScoredLine",
    "evaluate_scored",
    "line_pairs",
    "project_labels",
    "score_sessions",
    "token_pairs",
    "TransferMatrix",
    "check_compatible",
    "transfer_matrix",
]
