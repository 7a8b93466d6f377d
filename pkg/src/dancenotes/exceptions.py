"""Exception types shared across the engine."""


class EngineError(Exception):
    """Base class for all dancenotes errors."""


class InvalidInputError(EngineError, ValueError):
    """An argument violates a documented precondition."""


class PoseParseError(InvalidInputError):
    """A pose record could not be parsed; carries the offending frame index."""

    def __init__(self, message, frame_index=None):
        if frame_index is not None:
            message = f"frame {frame_index}: {message}"
        super().__init__(message)
        self.frame_index = frame_index


class NotesFormatError(InvalidInputError):
    """A notes JSON document failed validation."""


class WeightFormatError(EngineError):
    """A weight file has a bad magic, version, or tensor layout."""


class DatasetFormatError(EngineError):
    """A training dataset file has a bad magic, version, or payload size."""


class NumericError(EngineError):
    """A computation produced non-finite values."""


class ProtocolError(EngineError):
    """A streaming session message violated the session protocol."""
