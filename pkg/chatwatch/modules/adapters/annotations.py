"""
Aggregation of multi-annotator span labels into per-token gold classes.

Annotation JSONL holds one record per (line, annotator):

    {"match_id": str, "line_index": int, "annotator": str,
     "spans": [{"start": int, "end": int, "class": str}]}

An annotator who found nothing toxic in a reviewed line writes an empty
``spans`` list. Lines without any record are left unlabeled.
"""

import json
from collections import Counter, defaultdict
from dataclasses import dataclass
from pathlib import Path
from typing import Dict, List, Mapping, Sequence, Tuple, Union

from chatwatch.cwlogger import logger
from chatwatch.modules.chat import ChatLine, ToxicClass, most_severe
from chatwatch.modules.context import TokenizerLike

from .adapter_errors import AnnotationError

DEFAULT_ANNOTATORS = 3

LineRef = Tuple[str, int]


@dataclass(frozen=True)
class Span:
    start: int
    end: int
    toxic_class: ToxicClass

    def covers(self, token: int) -> bool:
        return self.start <= token < self.end


@dataclass(frozen=True)
class AnnotationSet:
    """
    Every annotator's spans over one chat line.

    Parameters
    ----------
    match_id : str
    line_index : int
    n_tokens : int
        Token count of the annotated line.
    annotators : Mapping[str, Tuple[Span, ...]]
        Spans per annotator name.
    k : int, optional
        Expected number of annotators, by default 3.
    """

    match_id: str
    line_index: int
    n_tokens: int
    annotators: Mapping[str, Tuple[Span, ...]]
    k: int = DEFAULT_ANNOTATORS

    def __post_init__(self):
        if len(self.annotators) != self.k:
            self._fail(f"expected {self.k} annotators, got {len(self.annotators)}")
        for name, spans in self.annotators.items():
            for span in spans:
                if not 0 <= span.start < span.end <= self.n_tokens:
                    self._fail(
                        f"span [{span.start}, {span.end}) of {name} outside "
                        f"{self.n_tokens} tokens"
                    )
                if not span.toxic_class.is_toxic:
                    self._fail(f"span of {name} is labeled non_toxic")
            ordered = sorted(spans, key=lambda s: s.start)
            for a, b in zip(ordered, ordered[1:]):
                if b.start < a.end:
                    self._fail(f"overlapping spans from {name}")

    def _fail(self, reason: str):
        raise AnnotationError(self.match_id, self.line_index, reason)

    @property
    def ref(self) -> LineRef:
        return (self.match_id, self.line_index)

    def annotator_labels(self, name: str) -> List[ToxicClass]:
        """One annotator's own per-token labels."""
        labels = [ToxicClass.NON_TOXIC] * self.n_tokens
        for span in self.annotators[name]:
            for t in range(span.start, span.end):
                labels[t] = span.toxic_class
        return labels


def aggregate_annotations(a: AnnotationSet) -> Tuple[ToxicClass, ...]:
    """
    Per-token majority vote. A token is toxic when a strict majority of the
    ``k`` annotators cover it; its class is the most frequent class among
    those covering it, ties going to the most severe class.
    """
    quorum = a.k // 2 + 1
    gold: List[ToxicClass] = []
    for t in range(a.n_tokens):
        votes = [
            span.toxic_class
            for spans in a.annotators.values()
            for span in spans
            if span.covers(t)
        ]
        if len(votes) < quorum:
            gold.append(ToxicClass.NON_TOXIC)
            continue
        counts = Counter(votes)
        top = max(counts.values())
        gold.append(most_severe(c for c, n in counts.items() if n == top))
    return tuple(gold)


def parse_span(raw: Mapping, ref: LineRef) -> Span:
    try:
        return Span(int(raw["start"]), int(raw["end"]), ToxicClass.parse(str(raw["class"])))
    except (KeyError, TypeError, ValueError) as e:
        raise AnnotationError(ref[0], ref[1], f"malformed span {raw!r} ({e})") from None


def read_annotation_records(
    path: Union[str, Path],
) -> Dict[LineRef, Dict[str, Tuple[Span, ...]]]:
    """Group annotation JSONL records by line, then by annotator."""
    grouped: Dict[LineRef, Dict[str, Tuple[Span, ...]]] = defaultdict(dict)
    with open(path, encoding="utf-8") as stream:
        for row, raw in enumerate(stream, start=1):
            if not raw.strip():
                continue
            record = json.loads(raw)
            try:
                ref = (str(record["match_id"]), int(record["line_index"]))
                annotator = str(record["annotator"])
                spans = record.get("spans") or []
            except (KeyError, TypeError, ValueError):
                raise AnnotationError(str(path), row, "malformed record") from None
            if annotator in grouped[ref]:
                raise AnnotationError(ref[0], ref[1], f"duplicate annotator {annotator}")
            grouped[ref][annotator] = tuple(parse_span(s, ref) for s in spans)
    return dict(grouped)


def build_annotation_sets(
    lines: Sequence[ChatLine],
    records: Mapping[LineRef, Mapping[str, Tuple[Span, ...]]],
    tokenizer: TokenizerLike,
    k: int = DEFAULT_ANNOTATORS,
) -> List[AnnotationSet]:
    by_ref = {(line.match_id, line.line_index): line for line in lines}
    unknown = [ref for ref in records if ref not in by_ref]
    if unknown:
        ref = unknown[0]
        raise AnnotationError(ref[0], ref[1], "no such chat line")
    return [
        AnnotationSet(
            match_id=ref[0],
            line_index=ref[1],
            n_tokens=len(tokenizer.encode(by_ref[ref].text)),
            annotators=dict(records[ref]),
            k=k,
        )
        for ref in sorted(records)
    ]


def apply_annotations(
    lines: Sequence[ChatLine], sets: Sequence[AnnotationSet]
) -> List[ChatLine]:
    """Attach aggregated gold labels to the annotated lines."""
    gold = {a.ref: aggregate_annotations(a) for a in sets}
    labeled = [
        line.with_labels(gold[(line.match_id, line.line_index)])
        if (line.match_id, line.line_index) in gold
        else line
        for line in lines
    ]
    logger.info(f"Aggregated labels for {len(gold)} of {len(lines)} lines")
    return labeled
