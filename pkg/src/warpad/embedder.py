"""Pluggable embedding backends mapping image patches to feature vectors.

Three backends behind one contract:

* ``test`` -- deterministic seeded linear projection of pooled pixels; no model
  file needed, exercises the whole pipeline bit-reproducibly.
* ``model_file`` -- a serialized inference graph taking ``pixels`` [N,3,S,S]
  float32 (already mean/std-normalized) to ``embedding`` [N,D] float32.
  ``.onnx`` files run through onnxruntime, ``.pt``/``.torchscript`` through
  torch.jit; both imports are lazy.
* ``remote`` -- HTTP client for an out-of-process embedding service
  (POST /embed with base64 float32 buffers).

Mean/std normalization happens inside ``embed_batch``; callers always hand in
[0,1]-domain pixels.
"""

from __future__ import annotations

import base64
import json
import os
import threading
import time
from dataclasses import dataclass, field

import numpy as np

from .errors import (
    BackendLoadError,
    ConfigurationError,
    DegenerateInputError,
    TransportError,
    ValidationError,
)
from .image import ImageTensor

BACKENDS = ("model_file", "remote", "test")
MODEL_DIR_ENV = "WARPAD_MODEL_DIR"

# Published preprocessing constants of the default self-supervised backbone.
DEFAULT_MEAN = (0.485, 0.456, 0.406)
DEFAULT_STD = (0.229, 0.224, 0.225)

# Test backend: pooling grid is prime so blocks never align with dyadic wavelet
# block structure (alignment would average away Haar detail perturbations).
_TEST_POOL_GRID = 13
_TEST_DIMS = 64
_TEST_SEED = 743150892


@dataclass(frozen=True)
class EmbeddingVector:
    data: np.ndarray

    def __post_init__(self):
        arr = np.asarray(self.data, dtype=np.float64)
        if arr.ndim != 1:
            raise ValidationError(f"embedding must be 1-D, got shape {arr.shape}")
        if not np.isfinite(arr).all():
            raise ValidationError("embedding contains non-finite values")
        arr.setflags(write=False)
        object.__setattr__(self, "data", arr)

    @property
    def dims(self) -> int:
        return self.data.shape[0]


@dataclass(frozen=True)
class EmbedderConfig:
    backend: str = "test"
    model_path: str | None = None
    endpoint: str | None = None
    input_size: int = 224
    normalization: tuple = (DEFAULT_MEAN, DEFAULT_STD)
    batch_size: int = 16
    max_inflight: int = 4

    def __post_init__(self):
        if self.backend not in BACKENDS:
            raise ConfigurationError(
                f"unknown backend {self.backend!r}; supported: {', '.join(BACKENDS)}"
            )
        if self.backend == "model_file" and not self.model_path:
            raise ConfigurationError("model_file backend requires model_path")
        if self.backend == "remote" and not self.endpoint:
            raise ConfigurationError("remote backend requires endpoint")
        if self.input_size < 1:
            raise ConfigurationError(f"input_size must be >= 1, got {self.input_size}")
        if self.batch_size < 1:
            raise ConfigurationError(f"batch_size must be >= 1, got {self.batch_size}")
        if self.max_inflight < 1:
            raise ConfigurationError(f"max_inflight must be >= 1, got {self.max_inflight}")
        mean, std = self.normalization
        if len(mean) != 3 or len(std) != 3:
            raise ConfigurationError("normalization mean/std must each have length 3")
        if any(s <= 0 for s in std):
            raise ConfigurationError("normalization std values must be positive")
        object.__setattr__(self, "normalization", (tuple(map(float, mean)), tuple(map(float, std))))

    def to_dict(self) -> dict:
        return {
            "backend": self.backend,
            "model_path": self.model_path,
            "endpoint": self.endpoint,
            "input_size": self.input_size,
            "normalization": [list(self.normalization[0]), list(self.normalization[1])],
            "batch_size": self.batch_size,
            "max_inflight": self.max_inflight,
        }


class Embedder:
    """Shared batching, normalization, validation, and call accounting."""

    def __init__(self, cfg: EmbedderConfig):
        self.cfg = cfg
        self._lock = threading.Lock()
        self.batches_embedded = 0
        self.images_embedded = 0

    def embed_batch(self, patches) -> list:
        size = self.cfg.input_size
        arrays = []
        for i, patch in enumerate(patches):
            data = patch.data if isinstance(patch, ImageTensor) else np.asarray(patch, dtype=np.float64)
            if data.shape != (3, size, size):
                raise ValidationError(
                    f"patch {i} has shape {data.shape}, backend expects (3, {size}, {size})"
                )
            arrays.append(data)
        if not arrays:
            return []
        mean, std = self.cfg.normalization
        mean = np.asarray(mean)[:, None, None]
        std = np.asarray(std)[:, None, None]
        out = []
        for start in range(0, len(arrays), self.cfg.batch_size):
            chunk = np.stack(arrays[start : start + self.cfg.batch_size])
            chunk = (chunk - mean) / std
            vectors = self._embed_chunk(chunk)
            if vectors.ndim != 2 or vectors.shape[0] != chunk.shape[0]:
                raise BackendLoadError(
                    f"backend returned shape {vectors.shape} for a batch of {chunk.shape[0]}"
                )
            out.extend(EmbeddingVector(v) for v in vectors)
            with self._lock:
                self.batches_embedded += 1
                self.images_embedded += chunk.shape[0]
        return out

    def _embed_chunk(self, chunk: np.ndarray) -> np.ndarray:
        raise NotImplementedError


class TestEmbedder(Embedder):
    """Fixed seeded linear projection of adaptively pooled normalized pixels.

    Pure affine map of the input pixels, so it is Lipschitz and the scoring
    pipeline is fully exercisable (and bit-reproducible) without a model file.
    Inputs of ``input_size <= 13`` skip pooling and are projected directly.
    """

    __test__ = False  # not a pytest class, despite the name

    def __init__(self, cfg: EmbedderConfig):
        super().__init__(cfg)
        self.grid = min(_TEST_POOL_GRID, cfg.input_size)
        feat = 3 * self.grid * self.grid
        rng = np.random.default_rng(_TEST_SEED)
        self.projection = rng.standard_normal((_TEST_DIMS, feat)) / np.sqrt(feat)
        bounds = [(i * cfg.input_size) // self.grid for i in range(self.grid)]
        self._bounds = np.asarray(bounds)
        self._counts = np.diff(np.append(self._bounds, cfg.input_size)).astype(np.float64)

    def _pool(self, chunk: np.ndarray) -> np.ndarray:
        if self.grid == self.cfg.input_size:
            return chunk
        summed = np.add.reduceat(chunk, self._bounds, axis=2)
        summed = np.add.reduceat(summed, self._bounds, axis=3)
        return summed / (self._counts[:, None] * self._counts[None, :])

    def _embed_chunk(self, chunk: np.ndarray) -> np.ndarray:
        pooled = self._pool(chunk)
        flat = pooled.reshape(chunk.shape[0], -1)
        return flat @ self.projection.T


class ModelFileEmbedder(Embedder):
    """Serialized-graph inference: ONNX via onnxruntime, TorchScript via torch.jit."""

    def __init__(self, cfg: EmbedderConfig):
        super().__init__(cfg)
        path = self._resolve(cfg.model_path)
        if path.endswith(".onnx"):
            self._runner = self._load_onnx(path)
        elif path.endswith((".pt", ".pth", ".torchscript")):
            self._runner = self._load_torchscript(path)
        else:
            raise BackendLoadError(
                f"unrecognized model extension on {path!r} "
                "(expected .onnx, .pt, .pth, or .torchscript)"
            )
        self.model_path = path

    @staticmethod
    def _resolve(path: str) -> str:
        if os.path.exists(path):
            return path
        search_dir = os.environ.get(MODEL_DIR_ENV)
        if search_dir and not os.path.isabs(path):
            candidate = os.path.join(search_dir, path)
            if os.path.exists(candidate):
                return candidate
        raise BackendLoadError(f"model file not found: {path}")

    @staticmethod
    def _load_onnx(path: str):
        try:
            import onnxruntime
        except ImportError:
            raise BackendLoadError(
                "onnxruntime is required for .onnx model files but is not installed"
            ) from None
        try:
            session = onnxruntime.InferenceSession(path, providers=["CPUExecutionProvider"])
        except Exception as exc:
            raise BackendLoadError(f"failed to load ONNX graph {path}: {exc}") from exc

        def run(arr):
            (out,) = session.run(["embedding"], {"pixels": arr})
            return np.asarray(out, dtype=np.float64)

        return run

    @staticmethod
    def _load_torchscript(path: str):
        try:
            import torch
        except ImportError:
            raise BackendLoadError(
                "torch is required for TorchScript model files but is not installed"
            ) from None
        try:
            module = torch.jit.load(path, map_location="cpu")
        except Exception as exc:
            raise BackendLoadError(f"failed to load TorchScript module {path}: {exc}") from exc
        module.eval()

        def run(arr):
            with torch.no_grad():
                out = module(torch.from_numpy(arr))
            return out.numpy().astype(np.float64)

        return run

    def _embed_chunk(self, chunk: np.ndarray) -> np.ndarray:
        return self._runner(np.ascontiguousarray(chunk, dtype=np.float32))


class RemoteEmbedder(Embedder):
    """Client for the HTTP embedding protocol (POST /embed, base64 float32)."""

    RETRIES = 3

    def __init__(self, cfg: EmbedderConfig, timeout: float = 60.0):
        super().__init__(cfg)
        import requests

        self._session = requests.Session()
        self._requests = requests
        self._timeout = timeout
        self._inflight = threading.Semaphore(cfg.max_inflight)
        url = cfg.endpoint.rstrip("/")
        self.url = url if url.endswith("/embed") else url + "/embed"

    def _embed_chunk(self, chunk: np.ndarray) -> np.ndarray:
        arr = np.ascontiguousarray(chunk, dtype="<f4")
        body = {
            "shape": list(arr.shape),
            "data_b64": base64.b64encode(arr.tobytes()).decode("ascii"),
        }
        last = "no attempt made"
        for attempt in range(self.RETRIES + 1):
            try:
                with self._inflight:
                    resp = self._session.post(self.url, json=body, timeout=self._timeout)
            except self._requests.RequestException as exc:
                last = str(exc)
            else:
                if resp.status_code == 200:
                    return self._decode(resp, arr.shape[0])
                try:
                    last = f"HTTP {resp.status_code}: {resp.json().get('error', resp.text)}"
                except (ValueError, json.JSONDecodeError):
                    last = f"HTTP {resp.status_code}"
                if 400 <= resp.status_code < 500:
                    raise TransportError(f"{self.url} rejected request: {last}", retries=attempt)
            if attempt < self.RETRIES:
                time.sleep(0.1 * (attempt + 1))
        raise TransportError(f"{self.url} unreachable: {last}", retries=self.RETRIES)

    @staticmethod
    def _decode(resp, n: int) -> np.ndarray:
        payload = resp.json()
        dims = int(payload["dims"])
        raw = base64.b64decode(payload["data_b64"])
        flat = np.frombuffer(raw, dtype="<f4")
        if flat.size != n * dims:
            raise TransportError(
                f"response carries {flat.size} floats, expected {n}x{dims}", retries=0
            )
        return flat.reshape(n, dims).astype(np.float64)


def make_embedder(cfg: EmbedderConfig) -> Embedder:
    if cfg.backend == "test":
        return TestEmbedder(cfg)
    if cfg.backend == "model_file":
        return ModelFileEmbedder(cfg)
    return RemoteEmbedder(cfg)


def embed_batch(patches, cfg: EmbedderConfig) -> list:
    """One-shot functional form; builds a fresh backend from cfg."""
    return make_embedder(cfg).embed_batch(patches)


def cosine_similarity(a: EmbeddingVector, b: EmbeddingVector) -> float:
    """a.b / (|a||b|) in double precision, clamped to [-1, 1]."""
    va = a.data if isinstance(a, EmbeddingVector) else np.asarray(a, dtype=np.float64)
    vb = b.data if isinstance(b, EmbeddingVector) else np.asarray(b, dtype=np.float64)
    if va.shape != vb.shape:
        raise ValidationError(f"embedding dims differ: {va.shape} vs {vb.shape}")
    na = float(np.linalg.norm(va))
    nb = float(np.linalg.norm(vb))
    if na == 0.0 or nb == 0.0:
        raise DegenerateInputError("zero-norm embedding (broken backend?)")
    return float(np.clip(np.dot(va, vb) / (na * nb), -1.0, 1.0))
