from typing import Optional


class AnnotationError(ValueError):
    def __init__(self, match_id: str, line_index: int, reason: str):
        self.match_id = match_id
        self.line_index = line_index
        self.reason = reason

    def __str__(self):
        return f"Annotation of {self.match_id}#{self.line_index}: {self.reason}"


class DotaSentenceError(ValueError):
    def __init__(self, match_id: str, reason: str):
        self.match_id = match_id
        self.reason = reason

    def __str__(self):
        return f"Merged sentence in {self.match_id}: {self.reason}"


class ThreadError(ValueError):
    def __init__(self, comment_id: str, reason: str):
        self.comment_id = comment_id
        self.reason = reason

    def __str__(self):
        return f"{self.reason}: {self.comment_id}"


class SyntheticConfigError(ValueError):
    def __init__(self, field: str, reason: str):
        self.field = field
        self.reason = reason

    def __str__(self):
        return f"Invalid synthetic config, {self.field}: {self.reason}"


class SplitError(ValueError):
    def __init__(self, reason: str, n_matches: Optional[int] = None):
        self.reason = reason
        self.n_matches = n_matches

    def __str__(self):
        return self.reason
