class MetricInputError(ValueError):
    def __init__(self, reason: str):
        self.reason = reason

    def __str__(self):
        return self.reason


class TransferError(ValueError):
    def __init__(self, name: str, reason: str):
        self.name = name
        self.reason = reason

    def __str__(self):
        return f"Checkpoint {self.name}: {self.reason}"
