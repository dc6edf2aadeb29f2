"""Numerical parity verification between a source backbone and its export.

Parity is measured in cosine similarity (the only functional the downstream
detector uses); PASS requires every seeded pair to reach at least 0.999.
"""

from __future__ import annotations

import numpy as np
import torch

from .backbones import load_backbone
from .errors import StructuralFailure
from .export import load_manifest

PASS_THRESHOLD = 0.999


def load_exported(path: str):
    """Load the exported graph as a callable float32 [N,3,S,S] -> [N,D]."""
    path = str(path)
    if path.endswith(".onnx"):
        try:
            import onnxruntime
        except ImportError:
            raise StructuralFailure(
                "onnxruntime is required to run .onnx exports but is not installed"
            ) from None
        try:
            session = onnxruntime.InferenceSession(path, providers=["CPUExecutionProvider"])
        except Exception as exc:
            raise StructuralFailure(f"cannot load ONNX graph {path}: {exc}") from exc

        def run(arr: np.ndarray) -> np.ndarray:
            (out,) = session.run(["embedding"], {"pixels": arr})
            return np.asarray(out)

        return run

    try:
        module = torch.jit.load(path, map_location="cpu")
    except Exception as exc:
        raise StructuralFailure(f"cannot load TorchScript module {path}: {exc}") from exc
    module.eval()

    def run(arr: np.ndarray) -> np.ndarray:
        with torch.no_grad():
            return module(torch.from_numpy(arr)).numpy()

    return run


def _pairwise_cosines(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    num = (a * b).sum(axis=1)
    den = np.linalg.norm(a, axis=1) * np.linalg.norm(b, axis=1)
    return num / den


def verify_parity(out_path, n_samples: int = 16, seed: int = 0) -> dict:
    """Run seeded random inputs through source and export; report cosines."""
    manifest = load_manifest(out_path)
    runner = load_exported(out_path)
    source = load_backbone(manifest.backbone_id, manifest.input_size)

    rng = np.random.default_rng(seed)
    inputs = rng.standard_normal(
        (n_samples, 3, manifest.input_size, manifest.input_size)
    ).astype(np.float32)

    exported_out = np.asarray(runner(inputs), dtype=np.float64)
    with torch.no_grad():
        source_out = source(torch.from_numpy(inputs)).numpy().astype(np.float64)

    if exported_out.shape != source_out.shape:
        raise StructuralFailure(
            f"shape mismatch: exported {exported_out.shape} vs source {source_out.shape}"
        )
    if exported_out.shape[1] != manifest.embedding_dims:
        raise StructuralFailure(
            f"exported dims {exported_out.shape[1]} contradict manifest "
            f"dims {manifest.embedding_dims}"
        )

    cosines = _pairwise_cosines(exported_out, source_out)
    min_cos = float(cosines.min())
    return {
        "backbone_id": manifest.backbone_id,
        "file": str(out_path),
        "n_samples": int(n_samples),
        "seed": int(seed),
        "min_cosine": min_cos,
        "max_cosine_distance": float(1.0 - min_cos),
        "pass": bool(min_cos >= PASS_THRESHOLD),
    }
