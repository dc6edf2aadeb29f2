"""Backbone export utility for the wavelet-perturbation detection pipeline."""

__version__ = "0.1.0"

from .backbones import DEBUG_BACKBONE, BackboneInfo, info, load_backbone, supported_ids
from .errors import ExportError, StructuralFailure
from .export import ExportManifest, export_backbone, file_digest, load_manifest, manifest_path
from .parity import PASS_THRESHOLD, load_exported, verify_parity

__all__ = [
    "BackboneInfo",
    "DEBUG_BACKBONE",
    "ExportError",
    "ExportManifest",
    "PASS_THRESHOLD",
    "StructuralFailure",
    "export_backbone",
    "file_digest",
    "info",
    "load_backbone",
    "load_exported",
    "load_manifest",
    "manifest_path",
    "supported_ids",
    "verify_parity",
    "__version__",
]
