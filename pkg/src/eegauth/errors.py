"""Exception hierarchy shared across the toolkit.

ValidationError covers bad configuration and violated preconditions;
DataError covers missing, malformed, or inconsistent on-disk data. The
CLI maps them to distinct exit codes (2 and 3).
"""


class EegAuthError(Exception):
    pass


class ValidationError(EegAuthError):
    pass


class DataError(EegAuthError):
    pass


class DegenerateChannelError(DataError):
    """A channel is constant or numerically dead (e.g. zero IQR)."""

    def __init__(self, channels, message=None):
        self.channels = list(channels)
        super().__init__(message or f"degenerate channel(s): {self.channels}")
