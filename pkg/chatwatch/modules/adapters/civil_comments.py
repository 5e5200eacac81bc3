"""
Adapter for threaded news comments. Every comment becomes its own session:
the ancestor chain (root first) as history plus the comment itself, which is
the only labeled line.

CSV or JSONL input columns: ``id``, ``parent_id`` (empty for roots),
``article_id``, ``comment_text`` and either a boolean ``toxic`` or a
``toxicity`` score (toxic when >= 0.5).
"""

from dataclasses import dataclass
from pathlib import Path
from typing import Dict, List, Optional, Sequence, Union

import pandas as pd

from chatwatch.cwlogger import logger
from chatwatch.modules.chat import ChatLine, ChatType, MatchSession, ToxicClass
from chatwatch.modules.context import TokenizerLike

from .adapter_errors import ThreadError

TOXIC_CLASS = ToxicClass.OTHER_OFFENSIVE
TOXICITY_THRESHOLD = 0.5


@dataclass(frozen=True)
class Comment:
    comment_id: str
    parent_id: Optional[str]
    article_id: str
    text: str
    toxic: bool


def ancestor_chain(comment: Comment, by_id: Dict[str, Comment]) -> List[Comment]:
    """Ancestors of ``comment`` from the thread root down to its parent."""
    chain: List[Comment] = []
    seen = {comment.comment_id}
    current = comment
    while current.parent_id is not None:
        parent = by_id.get(current.parent_id)
        if parent is None:
            raise ThreadError(current.parent_id, "dangling parent")
        if parent.comment_id in seen:
            raise ThreadError(comment.comment_id, "cycle in thread of comment")
        seen.add(parent.comment_id)
        chain.append(parent)
        current = parent
    chain.reverse()
    return chain


def _line(c: Comment, session_id: str, index: int) -> ChatLine:
    return ChatLine(
        match_id=session_id,
        line_index=index,
        player_key=c.comment_id,
        team_key=c.article_id,
        chat_type=ChatType.ALL,
        text=c.text,
    )


def adapt_cc_threads(
    comments: Sequence[Comment], tokenizer: TokenizerLike
) -> List[MatchSession]:
    """
    Raises
    ------
    ThreadError
        On a missing parent ("dangling parent: <id>") or a parent cycle.
    """
    by_id: Dict[str, Comment] = {}
    for c in comments:
        if c.comment_id in by_id:
            raise ThreadError(c.comment_id, "duplicate comment id")
        by_id[c.comment_id] = c

    sessions = []
    for c in comments:
        chain = ancestor_chain(c, by_id)
        session_id = f"{c.article_id}/{c.comment_id}"
        lines = [_line(a, session_id, i) for i, a in enumerate(chain)]
        n_tokens = len(tokenizer.encode(c.text))
        label = TOXIC_CLASS if c.toxic else ToxicClass.NON_TOXIC
        lines.append(_line(c, session_id, len(chain)).with_labels((label,) * n_tokens))
        sessions.append(
            MatchSession(match_id=session_id, lines=tuple(lines), team_size=None, num_teams=1)
        )
    return sessions


def _optional_id(value) -> Optional[str]:
    if value is None or (not isinstance(value, str) and pd.isna(value)) or value == "":
        return None
    if isinstance(value, float) and value.is_integer():
        value = int(value)
    return str(value)


def read_comments(path: Union[str, Path]) -> List[Comment]:
    path = Path(path)
    if path.suffix in (".jsonl", ".json"):
        frame = pd.read_json(path, lines=True, dtype=False)
    else:
        frame = pd.read_csv(path, dtype={"id": str, "parent_id": str, "article_id": str})

    missing = {"id", "article_id", "comment_text"} - set(frame.columns)
    if "toxic" not in frame.columns and "toxicity" not in frame.columns:
        missing.add("toxic|toxicity")
    if missing:
        raise ValueError(f"{path}: missing columns {sorted(missing)}")

    comments = []
    for row in frame.itertuples(index=False):
        toxic = (
            bool(row.toxic)
            if "toxic" in frame.columns
            else float(row.toxicity) >= TOXICITY_THRESHOLD
        )
        comments.append(
            Comment(
                comment_id=_optional_id(row.id) or "",
                parent_id=_optional_id(getattr(row, "parent_id", None)),
                article_id=_optional_id(row.article_id) or "",
                text="" if pd.isna(row.comment_text) else str(row.comment_text),
                toxic=toxic,
            )
        )
    logger.info(f"Read {len(comments)} comments from {path}")
    return comments
