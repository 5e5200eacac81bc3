"""
Adapter for merged-sentence DOTA 2 chat.

Input JSONL holds one merged sentence per line:

    {"match_id": str, "label": "explicit"|"implicit"|"action"|"other",
     "lines": [{"line_index": int, "player_key": str, "team_key": str,
                "chat_type": "team"|"all", "text": str,
                "toxic_tokens": [bool, ...]}]}

``toxic_tokens`` carries the corpus' automatic per-token toxicity flags and
may be omitted for sentences that are not explicitly toxic.
"""

import json
from collections import Counter
from dataclasses import dataclass
from enum import Enum
from pathlib import Path
from typing import Dict, List, Optional, Sequence, Tuple, Union

from chatwatch.cwlogger import logger
from chatwatch.modules.chat import ChatLine, ChatType, MatchSession, ToxicClass, group_sessions
from chatwatch.modules.context import TokenizerLike

from .adapter_errors import DotaSentenceError


class SentenceLabel(Enum):
    EXPLICIT = "explicit"
    IMPLICIT = "implicit"
    ACTION = "action"
    OTHER = "other"

    @classmethod
    def parse(cls, name: str) -> "SentenceLabel":
        aliases = {"explicitly_toxic": cls.EXPLICIT, "implicitly_toxic": cls.IMPLICIT}
        key = name.strip().lower()
        if key in aliases:
            return aliases[key]
        try:
            return cls(key)
        except ValueError:
            raise ValueError(f"Unknown sentence label: {name!r}") from None


# Where each per-line outcome lands in the taxonomy (see the ``dota`` label space).
EXPLICIT_CLASS = ToxicClass.INSULTS_FLAMING
IMPLICIT_CLASS = ToxicClass.OTHER_OFFENSIVE


@dataclass(frozen=True)
class MergedSentence:
    """Consecutive lines of one speaker annotated as one sentence."""

    lines: Tuple[ChatLine, ...]
    label: SentenceLabel
    toxic_tokens: Tuple[Tuple[bool, ...], ...] = ()

    @property
    def match_id(self) -> str:
        return self.lines[0].match_id if self.lines else "?"

    def validate(self) -> None:
        if not self.lines:
            raise DotaSentenceError(self.match_id, "empty sentence")
        first = self.lines[0]
        for prev, line in zip(self.lines, self.lines[1:]):
            if line.line_index != prev.line_index + 1:
                raise DotaSentenceError(
                    first.match_id, f"lines {prev.line_index} and {line.line_index} not consecutive"
                )
        for line in self.lines:
            if line.match_id != first.match_id:
                raise DotaSentenceError(first.match_id, "lines from different matches")
            if line.player_key != first.player_key:
                raise DotaSentenceError(
                    first.match_id, f"line {line.line_index} from a different speaker"
                )
        if self.toxic_tokens and len(self.toxic_tokens) != len(self.lines):
            raise DotaSentenceError(
                first.match_id,
                f"{len(self.toxic_tokens)} token flag lists for {len(self.lines)} lines",
            )


def _line_labels(
    sentence: MergedSentence, i: int, n_tokens: int
) -> Tuple[ToxicClass, ...]:
    label = sentence.label
    if label is SentenceLabel.EXPLICIT:
        flags = sentence.toxic_tokens[i] if sentence.toxic_tokens else ()
        if flags and len(flags) != n_tokens:
            raise DotaSentenceError(
                sentence.match_id,
                f"line {sentence.lines[i].line_index}: {len(flags)} token flags "
                f"for {n_tokens} tokens",
            )
        if not any(flags):
            return (ToxicClass.NON_TOXIC,) * n_tokens
        return tuple(EXPLICIT_CLASS if f else ToxicClass.NON_TOXIC for f in flags)
    if label is SentenceLabel.IMPLICIT:
        return (IMPLICIT_CLASS,) * n_tokens
    # action is merged into other
    return (ToxicClass.NON_TOXIC,) * n_tokens


def adapt_dota(
    sentences: Sequence[MergedSentence], tokenizer: TokenizerLike
) -> List[ChatLine]:
    """
    Break merged sentences back into labeled chat lines.

    An explicitly toxic sentence marks a constituent line explicit only if
    that line holds a flagged token; the line's flagged tokens become
    InsultsFlaming. Implicit sentences label every token OtherOffensive,
    and action/other sentences are non-toxic.

    Raises
    ------
    DotaSentenceError
        On an empty or inconsistent sentence.
    """
    out: List[ChatLine] = []
    for sentence in sentences:
        sentence.validate()
        for i, line in enumerate(sentence.lines):
            n_tokens = len(tokenizer.encode(line.text))
            out.append(line.with_labels(_line_labels(sentence, i, n_tokens)))
    return out


def dota_line_label(line: ChatLine) -> SentenceLabel:
    """Three-way label of an adapted line (action never appears)."""
    labels = line.token_labels or ()
    if EXPLICIT_CLASS in labels:
        return SentenceLabel.EXPLICIT
    if IMPLICIT_CLASS in labels:
        return SentenceLabel.IMPLICIT
    return SentenceLabel.OTHER


def parse_sentence(record: Dict, source: str = "<dota>", row: int = 0) -> MergedSentence:
    try:
        match_id = str(record["match_id"])
        label = SentenceLabel.parse(str(record["label"]))
        raw_lines = record["lines"]
        lines = tuple(
            ChatLine(
                match_id=match_id,
                line_index=int(r["line_index"]),
                player_key=str(r["player_key"]),
                team_key=str(r["team_key"]),
                chat_type=ChatType(str(r.get("chat_type", "all")).lower()),
                text=str(r["text"]),
            )
            for r in raw_lines
        )
        flags = tuple(tuple(bool(f) for f in r.get("toxic_tokens") or ()) for r in raw_lines)
    except (KeyError, TypeError, ValueError) as e:
        raise DotaSentenceError(str(record.get("match_id", "?")), f"{source}:{row}: {e}") from None
    return MergedSentence(lines, label, flags if any(flags) else ())


def read_dota_sentences(path: Union[str, Path]) -> List[MergedSentence]:
    sentences = []
    with open(path, encoding="utf-8") as stream:
        for row, raw in enumerate(stream, start=1):
            if raw.strip():
                sentences.append(parse_sentence(json.loads(raw), str(path), row))
    logger.info(f"Read {len(sentences)} merged sentences from {path}")
    return sentences


def adapt_dota_file(
    path: Union[str, Path], tokenizer: TokenizerLike, team_size: Optional[int] = 5
) -> List[MatchSession]:
    lines = adapt_dota(read_dota_sentences(path), tokenizer)
    tally = Counter(dota_line_label(line).value for line in lines)
    logger.info(f"Adapted {len(lines)} lines: {dict(sorted(tally.items()))}")
    return group_sessions(lines, team_size=team_size, num_teams=2)
