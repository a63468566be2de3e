"""Shared error base so the CLI can report every tool failure uniformly."""


class DocforgeError(Exception):
    """Base class for every error raised on bad input or bad state."""

    kind = "error"

    def __init__(self, message: str):
        super().__init__(message)
        self.message = message
