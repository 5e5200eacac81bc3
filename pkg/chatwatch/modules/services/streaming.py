"""
Line-at-a-time prediction over an interleaved multi-match stream.

Each match keeps its own history in memory until an end-of-match record
``{"match_id": ..., "end_of_match": true}`` arrives or the match stays idle
for ``idle_budget`` stream lines.
"""

import json
from collections import OrderedDict
from dataclasses import dataclass, field
from typing import IO, Dict, Iterator, List, Optional

from chatwatch.cwlogger import logger
from chatwatch.modules.chat import (
    ChatLine,
    LinePrediction,
    MatchSession,
    SessionError,
    SessionViolation,
    iter_json_records,
    parse_chat_record,
    prediction_to_record,
)
from chatwatch.modules.context import Scope
from chatwatch.modules.model import Checkpoint, Predictor

from .service_errors import StreamOrderError

END_OF_MATCH = "end_of_match"


@dataclass
class MatchState:
    match_id: str
    lines: List[ChatLine] = field(default_factory=list)
    teams: Dict[str, str] = field(default_factory=dict)
    last_seen: int = 0

    @property
    def next_index(self) -> Optional[int]:
        return self.lines[-1].line_index + 1 if self.lines else None


class StreamPredictor:
    """
    Parameters
    ----------
    checkpoint : Checkpoint
        Trained model and its context settings.
    scope : Optional[Scope], optional
        History scope override, by default the checkpoint's.
    idle_budget : Optional[int], optional
        Evict a match after this many stream lines without a line of its
        own, by default never.
    """

    def __init__(
        self,
        checkpoint: Checkpoint,
        scope: Optional[Scope] = None,
        idle_budget: Optional[int] = None,
    ):
        if idle_budget is not None and idle_budget < 1:
            raise ValueError("idle_budget must be positive")
        self.predictor = Predictor(checkpoint, scope)
        self.team_size = checkpoint.context.team_size
        self.num_teams = checkpoint.context.num_teams
        self.idle_budget = idle_budget
        self.matches: "OrderedDict[str, MatchState]" = OrderedDict()
        self.clock = 0

    @property
    def active_matches(self) -> int:
        return len(self.matches)

    def evict(self, match_id: str, reason: str) -> None:
        state = self.matches.pop(match_id, None)
        if state is not None:
            logger.debug(f"Evicted match {match_id} after {len(state.lines)} lines ({reason})")

    def _evict_idle(self) -> None:
        if self.idle_budget is None:
            return
        # matches are kept in least-recently-seen order
        while self.matches:
            match_id, state = next(iter(self.matches.items()))
            if self.clock - state.last_seen <= self.idle_budget:
                break
            self.evict(match_id, "idle")

    def push(self, line: ChatLine) -> LinePrediction:
        """
        Score ``line`` against the history of its match and keep it as
        history.

        Raises
        ------
        StreamOrderError
            If ``line`` does not directly follow the previous line of its match.
        SessionError
            If the speaker already chatted for another team in this match.
        """
        self.clock += 1
        state = self.matches.get(line.match_id)
        if state is None:
            state = MatchState(line.match_id)
            self.matches[line.match_id] = state
        expected = state.next_index
        if expected is not None and line.line_index != expected:
            raise StreamOrderError(line.match_id, expected, line.line_index)
        team = state.teams.setdefault(line.player_key, line.team_key)
        if team != line.team_key:
            raise SessionError(
                line.match_id,
                [
                    SessionViolation(
                        "team inconsistency",
                        f"player {line.player_key} appears on teams {sorted((team, line.team_key))}",
                    )
                ],
            )

        state.lines.append(line)
        state.last_seen = self.clock
        self.matches.move_to_end(line.match_id)

        s = MatchSession(line.match_id, tuple(state.lines), self.team_size, self.num_teams)
        prediction = self.predictor.predict_line(s, len(state.lines) - 1)
        self._evict_idle()
        return prediction

    def process(self, record: Dict, source: str = "<stdin>", row: int = 0) -> Optional[LinePrediction]:
        if record.get(END_OF_MATCH):
            self.evict(str(record.get("match_id")), "end of match")
            return None
        return self.push(parse_chat_record(record, source, row))

    def run(self, stream: IO[str], source: str = "<stdin>") -> Iterator[LinePrediction]:
        for row, record in enumerate(iter_json_records(stream, source), start=1):
            prediction = self.process(record, source, row)
            if prediction is not None:
                yield prediction


def predict_stream(
    predictor: StreamPredictor, stream: IO[str], out: IO[str], source: str = "<stdin>"
) -> int:
    """Write one JSON record per input line as soon as it is scored."""
    n = 0
    for prediction in predictor.run(stream, source):
        out.write(json.dumps(prediction_to_record(prediction), ensure_ascii=False))
        out.write("\n")
        out.flush()
        n += 1
    return n
