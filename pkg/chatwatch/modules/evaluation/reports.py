"""JSON, aligned-text and CSV renderings of evaluation results."""

import json
import math
from pathlib import Path
from typing import Any, Dict, Iterable, Mapping, Sequence, Union

import pandas as pd

from .cold_start import BinReport
from .curves import PRCurve
from .metrics import MetricsReport

FLOAT_DIGITS = 6


def _clean(value: Any) -> Any:
    if isinstance(value, float):
        if math.isnan(value) or math.isinf(value):
            return None
        return round(value, FLOAT_DIGITS)
    if isinstance(value, Mapping):
        return {str(k): _clean(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_clean(v) for v in value]
    return value


def to_json(payload: Any) -> str:
    """Deterministic JSON: sorted keys, rounded floats, NaN/inf as null."""
    return json.dumps(_clean(payload), indent=2, sort_keys=True, ensure_ascii=False)


def write_json(payload: Any, path: Union[str, Path]) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(to_json(payload) + "\n", encoding="utf-8")
    return path


def metrics_table(reports: Mapping[str, MetricsReport]) -> str:
    """One row per named report, columns aligned."""
    frame = pd.DataFrame(
        [
            {
                "run": name,
                "level": r.level,
                "precision": 100 * r.precision,
                "recall": 100 * r.recall,
                "f1": 100 * r.f1,
                "support": r.support,
            }
            for name, r in reports.items()
        ]
    )
    return frame.to_string(index=False, float_format=lambda x: f"{x:.2f}")


def per_class_table(report: MetricsReport) -> str:
    frame = pd.DataFrame(
        [
            {
                "class": c.value,
                "precision": 100 * m.precision,
                "recall": 100 * m.recall,
                "f1": 100 * m.f1,
                "support": m.support,
            }
            for c, m in report.per_class.items()
        ]
    )
    return frame.to_string(index=False, float_format=lambda x: f"{x:.2f}")


def bins_table(bins: Sequence[BinReport]) -> str:
    frame = pd.DataFrame([b.to_dict() for b in bins])
    return frame.to_string(index=False, na_rep="-", float_format=lambda x: f"{x:.4f}")


def records_table(rows: Iterable[Dict[str, Any]]) -> str:
    return pd.DataFrame(list(rows)).to_string(
        index=False, na_rep="undefined", float_format=lambda x: f"{x:.2f}"
    )


def write_curve_csv(curve: PRCurve, path: Union[str, Path]) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    curve.to_frame().to_csv(path, index=False)
    return path
