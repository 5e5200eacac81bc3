from typing import Optional


class EmptyLineError(ValueError):
    def __str__(self):
        return "empty line"


class ChatRecordError(ValueError):
    def __init__(self, reason: str, source: Optional[str] = None, row: int = 0):
        self.reason = reason
        self.source = source
        self.row = row

    def __str__(self):
        where = f"{self.source}:{self.row}: " if self.source else ""
        return f"{where}{self.reason}"


class SessionError(ValueError):
    def __init__(self, match_id: str, violations: list):
        self.match_id = match_id
        self.violations = violations

    def __str__(self):
        listed = "; ".join(str(v) for v in self.violations)
        return f"Invalid session {self.match_id}: {listed}"
