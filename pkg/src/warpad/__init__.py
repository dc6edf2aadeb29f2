"""Training-free AI-generated-image detection via wavelet HF perturbation sensitivity."""

__version__ = "0.1.0"

from .embedder import EmbedderConfig, EmbeddingVector, cosine_similarity, embed_batch, make_embedder
from .evaluation import DatasetManifest, EvalReport, auroc, run_eval, sweep
from .image import ImageTensor
from .imageops import CorruptionSpec, PatchGrid, corrupt, load_image, rescale, rescale_n_patchify
from .scoring import (
    DecisionRule,
    DetectorConfig,
    ScoreRecord,
    classify,
    hfwav_score,
    patch_score_map,
    rigid_score,
    warpad_score,
)
from .wavelet import (
    WaveletPyramid,
    WaveletSpec,
    dwt2_multilevel,
    high_frequency_component,
    idwt2_multilevel,
)

__all__ = [
    "CorruptionSpec",
    "DatasetManifest",
    "DecisionRule",
    "DetectorConfig",
    "EmbedderConfig",
    "EmbeddingVector",
    "EvalReport",
    "ImageTensor",
    "PatchGrid",
    "ScoreRecord",
    "WaveletPyramid",
    "WaveletSpec",
    "auroc",
    "classify",
    "corrupt",
    "cosine_similarity",
    "dwt2_multilevel",
    "embed_batch",
    "hfwav_score",
    "high_frequency_component",
    "idwt2_multilevel",
    "load_image",
    "make_embedder",
    "patch_score_map",
    "rescale",
    "rescale_n_patchify",
    "rigid_score",
    "run_eval",
    "sweep",
    "warpad_score",
    "__version__",
]
