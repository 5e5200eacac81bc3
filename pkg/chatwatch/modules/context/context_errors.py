class RelativeIdOverflow(ValueError):
    def __init__(self, match_id: str, reason: str):
        self.match_id = match_id
        self.reason = reason

    def __str__(self):
        return f"Relative id overflow in match {self.match_id}: {self.reason}"


class UnknownMetadataMode(ValueError):
    def __init__(self, mode: object):
        self.mode = mode

    def __str__(self):
        return (
            f"Unknown metadata mode {self.mode!r}, expected one of "
            "'speaker-segmentation', 'in-line', 'none'"
        )
