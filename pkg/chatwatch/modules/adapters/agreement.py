from dataclasses import dataclass
from typing import List, Sequence, Tuple

import numpy as np
from statsmodels.stats.inter_rater import fleiss_kappa as _statsmodels_fleiss

from chatwatch.modules.chat import ToxicClass, line_class_from_tokens

from .annotations import AnnotationSet


@dataclass(frozen=True)
class AgreementTable:
    """
    Annotator counts per line (rows) and category (columns). Every row sums
    to the number of annotators ``k``.
    """

    counts: np.ndarray
    categories: Tuple[ToxicClass, ...] = tuple(ToxicClass)

    def __post_init__(self):
        counts = np.asarray(self.counts)
        if counts.ndim != 2 or counts.shape[0] == 0:
            raise ValueError("Agreement table needs at least one row")
        if counts.shape[1] != len(self.categories):
            raise ValueError(
                f"{counts.shape[1]} columns for {len(self.categories)} categories"
            )
        if (counts < 0).any():
            raise ValueError("Agreement counts must be non-negative")
        totals = counts.sum(axis=1)
        if not (totals == totals[0]).all():
            raise ValueError("Every row must sum to the same number of annotators")
        if totals[0] < 2:
            raise ValueError("Fleiss kappa needs at least two annotators per line")

    @property
    def k(self) -> int:
        return int(np.asarray(self.counts).sum(axis=1)[0])

    def __len__(self) -> int:
        return int(np.asarray(self.counts).shape[0])


def annotator_line_class(a: AnnotationSet, name: str) -> ToxicClass:
    labels = a.annotator_labels(name)
    return line_class_from_tokens(labels) if labels else ToxicClass.NON_TOXIC


def build_agreement_table(sets: Sequence[AnnotationSet]) -> AgreementTable:
    """Line-level table: each annotator votes the most severe class of their
    own spans."""
    categories = tuple(ToxicClass)
    column = {c: i for i, c in enumerate(categories)}
    rows: List[np.ndarray] = []
    for a in sets:
        row = np.zeros(len(categories), dtype=np.int64)
        for name in a.annotators:
            row[column[annotator_line_class(a, name)]] += 1
        rows.append(row)
    return AgreementTable(np.vstack(rows), categories)


def fleiss_kappa(t: AgreementTable) -> float:
    """
    Fleiss' kappa ``(P - Pe) / (1 - Pe)``.

    ``Pe == 1`` only when every vote falls in one category, which is
    perfect agreement: kappa is 1.0.
    """
    counts = np.asarray(t.counts, dtype=np.float64)
    p_j = counts.sum(axis=0) / counts.sum()
    if np.isclose(float((p_j**2).sum()), 1.0):
        return 1.0
    return float(_statsmodels_fleiss(counts, method="fleiss"))
