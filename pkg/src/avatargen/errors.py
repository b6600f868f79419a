"""Exception hierarchy shared by all avatargen modules."""


class AvatarGenError(Exception):
    """Base class for all errors raised by this package."""


class ValidationError(AvatarGenError, ValueError):
    """An input violated a documented precondition (shape, range, emptiness)."""


class UnknownSpeakerError(AvatarGenError, KeyError):
    """Referenced speaker id is not registered."""


class ConfigError(AvatarGenError, ValueError):
    """Malformed configuration: unknown keys, bad types, or bad values."""


class CheckpointError(AvatarGenError):
    """Checkpoint file is corrupt or incompatible with the receiving model."""


class TrainingDivergedError(AvatarGenError):
    """Training hit a non-finite loss; message names the offending component."""


class PipelineStageError(AvatarGenError):
    """A pipeline stage failed; carries the stage name and request echo."""

    def __init__(self, stage: str, message: str, request_echo: dict | None = None):
        super().__init__(f"stage '{stage}' failed: {message}")
        self.stage = stage
        self.request_echo = request_echo or {}
