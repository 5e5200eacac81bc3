class EmptySupervisionError(ValueError):
    def __str__(self):
        return "empty supervision"


class EmbeddingRangeError(IndexError):
    def __init__(self, track: str, value: int, vocab: int):
        self.track = track
        self.value = value
        self.vocab = vocab

    def __str__(self):
        return f"{self.track} id {self.value} outside embedding table of size {self.vocab}"


class ShapeMismatchError(ValueError):
    def __init__(self, reason: str):
        self.reason = reason

    def __str__(self):
        return f"Input does not match model config: {self.reason}"


class EmptySplitError(ValueError):
    def __init__(self, split: str):
        self.split = split

    def __str__(self):
        return f"The {self.split} split has no labeled lines"


class TokenLabelMismatch(ValueError):
    def __init__(self, match_id: str, line_index: int, n_labels: int, n_tokens: int):
        self.match_id = match_id
        self.line_index = line_index
        self.n_labels = n_labels
        self.n_tokens = n_tokens

    def __str__(self):
        return (
            f"Line {self.match_id}#{self.line_index} has {self.n_labels} token labels "
            f"for {self.n_tokens} tokens"
        )


class CheckpointError(ValueError):
    def __init__(self, path: object, reason: str):
        self.path = path
        self.reason = reason

    def __str__(self):
        return f"Checkpoint {self.path}: {self.reason}"
