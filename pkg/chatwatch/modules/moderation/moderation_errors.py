class UnknownPlayerError(KeyError):
    def __init__(self, player: str, context: str = ""):
        self.player = player
        self.context = context

    def __str__(self):
        where = f" ({self.context})" if self.context else ""
        return f"Unknown player {self.player}{where}"


class ReportSetError(ValueError):
    def __init__(self, reason: str):
        self.reason = reason

    def __str__(self):
        return f"Invalid report sets: {self.reason}"


class NotificationFailure(Exception):
    def __init__(self, n_targets: int):
        self.n_targets = n_targets

    def __str__(self):
        return f"Report delivery failed for {self.n_targets} target(s)"
