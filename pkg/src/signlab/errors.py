"""Shared exception types."""


class SignlabError(Exception):
    """Base class for all signlab errors."""


class IngestionError(SignlabError):
    """A source video could not be read."""


class EmptyRecordingError(IngestionError):
    """A video is shorter than one sampling interval."""


class FormatError(SignlabError):
    """An image or array has the wrong shape or channel count."""


class DataError(SignlabError):
    """A dataset split is empty or malformed."""


class SpecError(SignlabError):
    """A model spec is inconsistent (e.g. frozen layers exceed layer count)."""


class RegistryError(SignlabError):
    """Unknown backbone name."""


class DivergenceError(SignlabError):
    """Training produced a non-finite loss."""


class CheckpointError(SignlabError):
    """A checkpoint is missing, corrupt, or incompatible."""


class InputError(SignlabError):
    """Mismatched or invalid operation inputs."""
