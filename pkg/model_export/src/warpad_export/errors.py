"""Error taxonomy for the export tool."""


class ExportError(Exception):
    """Unknown backbone, unavailable dependency, or failed graph export."""


class StructuralFailure(Exception):
    """Exported file unreadable, or its shapes/dims contradict the manifest."""
