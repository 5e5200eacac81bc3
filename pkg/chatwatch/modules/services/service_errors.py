from typing import Optional


class ConfigError(ValueError):
    def __init__(
        self,
        reason: str,
        line: Optional[int] = None,
        column: Optional[int] = None,
        source: Optional[str] = None,
    ):
        self.reason = reason
        self.line = line
        self.column = column
        self.source = source

    def __str__(self):
        where = self.source or "<config>"
        if self.line is not None:
            where += f":{self.line}"
            if self.column is not None:
                where += f":{self.column}"
        return f"{where}: {self.reason}"


class StreamOrderError(ValueError):
    def __init__(self, match_id: str, expected: int, got: int):
        self.match_id = match_id
        self.expected = expected
        self.got = got

    def __str__(self):
        return (
            f"Out-of-order line in match {self.match_id}: "
            f"expected line_index {self.expected}, got {self.got}"
        )
