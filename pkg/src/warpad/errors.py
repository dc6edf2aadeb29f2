"""Exception taxonomy, mapped onto CLI exit codes by warpad.cli."""


class WarpadError(Exception):
    """Base class for all package errors."""


class ConfigurationError(WarpadError):
    """Invalid configuration value or inadmissible parameter combination."""


class ValidationError(WarpadError):
    """Invalid runtime input (non-finite data, bad shapes, empty lists)."""


class StructuralError(WarpadError):
    """Inconsistent serialized structure (pyramid shape metadata, model graph)."""


class IngestionError(WarpadError):
    """A file could not be read or decoded."""

    def __init__(self, path, reason=""):
        self.path = str(path)
        super().__init__(f"cannot ingest {self.path}" + (f": {reason}" if reason else ""))


class BackendLoadError(WarpadError):
    """An embedding backend failed to initialize (missing/corrupt model)."""


class TransportError(WarpadError):
    """Remote embedding endpoint unreachable or returned an error."""

    def __init__(self, message, retries=0):
        self.retries = retries
        super().__init__(f"{message} (after {retries} retries)")


class DegenerateInputError(WarpadError):
    """Zero-norm embedding or similarly degenerate numeric input."""
