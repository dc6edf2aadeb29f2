"""Detection score functions: per-patch HF-perturbation sensitivity, the
patch-averaged detector score, the Gaussian-noise baseline, and the threshold rule."""

from __future__ import annotations

import csv
import hashlib
import json
import math
from dataclasses import dataclass, field, replace

import numpy as np

from .embedder import Embedder, EmbedderConfig, cosine_similarity, make_embedder
from .errors import ConfigurationError, ValidationError
from .image import ImageTensor
from .imageops import rescale, rescale_n_patchify
from .wavelet import WaveletSpec, high_frequency_component

AGGREGATIONS = ("mean", "median", "min", "max")


def canonical_json(obj) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":"))


@dataclass(frozen=True)
class DetectorConfig:
    """Full reproducibility record of a detector run."""

    alpha: float = 0.1
    d_rescale: int = 1344
    d_patch: int = 224
    aggregation: str = "mean"
    wavelet: WaveletSpec = field(default_factory=lambda: WaveletSpec("haar", 2, "symmetric"))
    clip_perturbed: bool = False
    embedder: EmbedderConfig = field(default_factory=EmbedderConfig)

    def __post_init__(self):
        if not 0 < self.alpha < 1:
            raise ConfigurationError(f"alpha must be in (0,1), got {self.alpha}")
        if self.d_rescale < 1 or self.d_patch < 1:
            raise ConfigurationError("d_rescale and d_patch must be >= 1")
        if self.d_rescale % self.d_patch:
            raise ConfigurationError(
                f"d_rescale={self.d_rescale} is not divisible by d_patch={self.d_patch}"
            )
        if self.aggregation not in AGGREGATIONS:
            raise ConfigurationError(
                f"unknown aggregation {self.aggregation!r}; supported: {', '.join(AGGREGATIONS)}"
            )
        if self.d_patch != self.embedder.input_size:
            raise ConfigurationError(
                f"d_patch={self.d_patch} must equal embedder input_size="
                f"{self.embedder.input_size}"
            )

    @property
    def n_patch(self) -> int:
        return (self.d_rescale // self.d_patch) ** 2

    def to_dict(self) -> dict:
        return {
            "alpha": self.alpha,
            "d_rescale": self.d_rescale,
            "d_patch": self.d_patch,
            "aggregation": self.aggregation,
            "wavelet": {
                "family": self.wavelet.family,
                "levels": self.wavelet.levels,
                "boundary": self.wavelet.boundary,
            },
            "clip_perturbed": self.clip_perturbed,
            "embedder": self.embedder.to_dict(),
        }

    @classmethod
    def from_dict(cls, raw: dict, embedder: EmbedderConfig | None = None) -> "DetectorConfig":
        known = {
            "alpha", "d_rescale", "d_patch", "aggregation", "wavelet",
            "clip_perturbed", "embedder",
        }
        unknown = set(raw) - known
        if unknown:
            raise ConfigurationError(f"unknown detector config key: {sorted(unknown)[0]!r}")
        kwargs = dict(raw)
        if "wavelet" in kwargs:
            w = kwargs["wavelet"]
            wl_unknown = set(w) - {"family", "levels", "boundary"}
            if wl_unknown:
                raise ConfigurationError(f"unknown wavelet config key: {sorted(wl_unknown)[0]!r}")
            kwargs["wavelet"] = WaveletSpec(**w)
        if embedder is not None:
            kwargs["embedder"] = embedder
        elif "embedder" in kwargs and isinstance(kwargs["embedder"], dict):
            kwargs["embedder"] = EmbedderConfig(**kwargs["embedder"])
        return cls(**kwargs)

    def digest(self) -> str:
        return hashlib.sha256(canonical_json(self.to_dict()).encode()).hexdigest()


@dataclass(frozen=True)
class DecisionRule:
    tau: float

    def __post_init__(self):
        if not math.isfinite(self.tau):
            raise ValidationError(f"threshold must be finite, got {self.tau}")


@dataclass(frozen=True)
class ScoreRecord:
    image_id: str
    score: float
    patch_scores: tuple
    config_digest: str

    def __post_init__(self):
        scores = tuple(float(s) for s in self.patch_scores)
        if any(not -1.0 <= s <= 1.0 for s in scores):
            raise ValidationError("patch scores must lie in [-1, 1]")
        object.__setattr__(self, "patch_scores", scores)

    @classmethod
    def build(cls, image_id: str, patch_scores, cfg: DetectorConfig) -> "ScoreRecord":
        return cls(
            image_id=image_id,
            score=aggregate(patch_scores, cfg.aggregation),
            patch_scores=tuple(patch_scores),
            config_digest=cfg.digest(),
        )

    def to_json_line(self) -> str:
        return canonical_json(
            {
                "image_id": self.image_id,
                "score": self.score,
                "patch_scores": list(self.patch_scores),
                "config_digest": self.config_digest,
            }
        )

    @classmethod
    def from_json_line(cls, line: str) -> "ScoreRecord":
        raw = json.loads(line)
        return cls(
            image_id=raw["image_id"],
            score=raw["score"],
            patch_scores=tuple(raw["patch_scores"]),
            config_digest=raw["config_digest"],
        )


def aggregate(patch_scores, rule: str) -> float:
    """Fold patch scores; median of an even count is the midpoint of the two
    central order statistics."""
    arr = np.asarray(list(patch_scores), dtype=np.float64)
    if arr.size == 0:
        raise ValidationError("cannot aggregate an empty score list")
    if rule == "mean":
        return float(np.mean(arr))
    if rule == "median":
        return float(np.median(arr))
    if rule == "min":
        return float(np.min(arr))
    if rule == "max":
        return float(np.max(arr))
    raise ConfigurationError(f"unknown aggregation {rule!r}")


def _perturb(patch: ImageTensor, cfg: DetectorConfig) -> ImageTensor:
    hf = high_frequency_component(patch, cfg.wavelet)
    perturbed = patch.data - cfg.alpha * hf.data
    if cfg.clip_perturbed:
        perturbed = np.clip(perturbed, 0.0, 1.0)
    return ImageTensor(perturbed)


def hfwav_score(patch: ImageTensor, cfg: DetectorConfig, embedder: Embedder) -> float:
    """Cosine similarity between embeddings of a patch and the patch nudged
    against its wavelet high-frequency component (original and perturbed are
    embedded in one batch of two)."""
    if patch.data.shape != (3, cfg.d_patch, cfg.d_patch):
        raise ValidationError(
            f"patch has shape {patch.data.shape}, expected (3, {cfg.d_patch}, {cfg.d_patch})"
        )
    vecs = embedder.embed_batch([patch, _perturb(patch, cfg)])
    return cosine_similarity(vecs[0], vecs[1])


def warpad_score(
    x: ImageTensor, cfg: DetectorConfig, embedder: Embedder, image_id: str = ""
) -> ScoreRecord:
    """Aggregate per-patch sensitivity over the rescaled, tiled image.

    Original/perturbed pairs are interleaved into a single embed_batch call so
    backend nondeterminism (if any) hits both sides of each cosine equally.
    """
    grid = rescale_n_patchify(x, cfg.d_rescale, cfg.d_patch)
    interleaved = []
    for patch in grid.patches:
        interleaved.append(patch)
        interleaved.append(_perturb(patch, cfg))
    vecs = embedder.embed_batch(interleaved)
    patch_scores = [
        cosine_similarity(vecs[2 * i], vecs[2 * i + 1]) for i in range(len(grid))
    ]
    return ScoreRecord.build(image_id, patch_scores, cfg)


def rigid_score(
    x: ImageTensor,
    sigma: float,
    seed: int,
    cfg: DetectorConfig,
    embedder: Embedder,
    sigma_in_8bit: bool = False,
) -> float:
    """Gaussian-pixel-noise baseline: cosine between embeddings of the rescaled
    image and the same image plus seeded noise (no patching)."""
    if sigma < 0:
        raise ValidationError(f"sigma must be >= 0, got {sigma}")
    scale = sigma / 255.0 if sigma_in_8bit else sigma
    base = rescale(x, cfg.d_patch)
    noise = np.random.default_rng(seed).standard_normal(base.data.shape)
    noisy = ImageTensor(base.data + scale * noise)
    vecs = embedder.embed_batch([base, noisy])
    return cosine_similarity(vecs[0], vecs[1])


def classify(record: ScoreRecord, rule: DecisionRule) -> str:
    """'real' iff score >= tau (boundary counts as real)."""
    score = record.score if isinstance(record, ScoreRecord) else float(record)
    return "real" if score >= rule.tau else "generated"


def patch_score_map(record: ScoreRecord):
    """Reshape patch scores to their row-major grid; returns (grid, argmax_rc, argmin_rc).

    Ties resolve to the first occurrence in row-major order.
    """
    n = len(record.patch_scores)
    side = math.isqrt(n)
    if side * side != n:
        raise ValidationError(f"{n} patch scores do not form a square grid")
    grid = np.asarray(record.patch_scores, dtype=np.float64).reshape(side, side)
    flat_max = int(np.argmax(grid))
    flat_min = int(np.argmin(grid))
    return grid, divmod(flat_max, side), divmod(flat_min, side)


def write_score_records(records, path) -> None:
    with open(path, "w") as fh:
        for rec in records:
            fh.write(rec.to_json_line() + "\n")


def read_score_records(path) -> list:
    with open(path) as fh:
        return [ScoreRecord.from_json_line(line) for line in fh if line.strip()]


def write_patch_map(record: ScoreRecord, csv_path, sidecar_path=None) -> None:
    """Figure-style export: CSV grid of patch scores plus extremum sidecar."""
    grid, argmax_rc, argmin_rc = patch_score_map(record)
    with open(csv_path, "w", newline="") as fh:
        writer = csv.writer(fh)
        for row in grid:
            writer.writerow([repr(v) for v in row])
    if sidecar_path is not None:
        with open(sidecar_path, "w") as fh:
            json.dump({"argmax": list(argmax_rc), "argmin": list(argmin_rc)}, fh)


def variant(cfg: DetectorConfig, **changes) -> DetectorConfig:
    """dataclasses.replace that keeps embedder input_size in lockstep with d_patch."""
    if "d_patch" in changes and "embedder" not in changes:
        changes["embedder"] = replace(cfg.embedder, input_size=changes["d_patch"])
    return replace(cfg, **changes)
