"""Image ingestion, rescaling, patchification, and test-time corruptions."""

from __future__ import annotations

import io
from dataclasses import dataclass, field

import numpy as np
from PIL import Image, UnidentifiedImageError

from .errors import ConfigurationError, IngestionError, ValidationError
from .image import ImageTensor

CORRUPTION_KINDS = ("jpeg", "center_crop", "gaussian_noise")


@dataclass(frozen=True)
class PatchGrid:
    """Row-major non-overlapping tiling of a rescaled image."""

    patches: tuple
    grid_rows: int
    grid_cols: int
    source_dims: tuple

    def __post_init__(self):
        if len(self.patches) != self.grid_rows * self.grid_cols:
            raise ValidationError(
                f"{len(self.patches)} patches inconsistent with "
                f"{self.grid_rows}x{self.grid_cols} grid"
            )

    def __len__(self):
        return len(self.patches)

    def reassemble(self) -> ImageTensor:
        """Stitch patches back together; bit-identical to the rescaled source."""
        rows = []
        for r in range(self.grid_rows):
            row = [self.patches[r * self.grid_cols + c].data for c in range(self.grid_cols)]
            rows.append(np.concatenate(row, axis=2))
        return ImageTensor(np.concatenate(rows, axis=1))


@dataclass(frozen=True)
class CorruptionSpec:
    """One test-time corruption: jpeg quality, center-crop ratio, or noise sigma."""

    kind: str
    parameter: float
    seed: int = 0

    def __post_init__(self):
        if self.kind not in CORRUPTION_KINDS:
            raise ConfigurationError(
                f"unknown corruption {self.kind!r}; supported: {', '.join(CORRUPTION_KINDS)}"
            )
        p = self.parameter
        if self.kind == "jpeg" and not (float(p).is_integer() and 1 <= p <= 100):
            raise ConfigurationError(f"jpeg quality must be an integer in [1,100], got {p}")
        if self.kind == "center_crop" and not 0 < p <= 1:
            raise ConfigurationError(f"center-crop ratio must be in (0,1], got {p}")
        if self.kind == "gaussian_noise" and p < 0:
            raise ConfigurationError(f"noise sigma must be >= 0, got {p}")

    def to_dict(self):
        return {"kind": self.kind, "parameter": self.parameter, "seed": self.seed}


def load_image(path) -> ImageTensor:
    """Decode PNG/JPEG/WebP to a 3-channel [0,1] tensor (grayscale replicated, alpha dropped)."""
    try:
        with Image.open(path) as img:
            rgb = img.convert("RGB")
            arr = np.asarray(rgb, dtype=np.float64) / 255.0
    except FileNotFoundError:
        raise IngestionError(path, "file not found") from None
    except UnidentifiedImageError:
        raise IngestionError(path, "not a decodable image") from None
    except OSError as exc:
        raise IngestionError(path, str(exc)) from None
    return ImageTensor(arr.transpose(2, 0, 1))


def _resize_weights(in_n: int, out_n: int) -> np.ndarray:
    """Dense (out_n, in_n) triangle-filter resampling matrix.

    Antialiased on downscale (filter support scales with the reduction factor),
    classic bilinear on upscale; window taps are clipped to the image and the
    weights renormalized, matching common vision-pipeline resizers.
    """
    scale = in_n / out_n
    support = max(scale, 1.0)
    weights = np.zeros((out_n, in_n))
    for j in range(out_n):
        center = (j + 0.5) * scale
        lo = max(int(np.floor(center - support + 0.5)), 0)
        hi = min(int(np.floor(center + support + 0.5)), in_n)
        taps = np.arange(lo, hi)
        w = 1.0 - np.abs((taps + 0.5 - center) / support)
        w = np.clip(w, 0.0, None)
        total = w.sum()
        if total <= 0:  # degenerate window; fall back to nearest tap
            nearest = min(max(int(center), 0), in_n - 1)
            weights[j, nearest] = 1.0
        else:
            weights[j, lo:hi] = w / total
    return weights


def _resize(x: ImageTensor, out_h: int, out_w: int) -> ImageTensor:
    data = x.data
    if out_h != x.height:
        data = np.einsum("oh,chw->cow", _resize_weights(x.height, out_h), data)
    if out_w != x.width:
        data = np.einsum("ow,chw->cho", _resize_weights(x.width, out_w), data)
    if data is x.data:
        return x
    return ImageTensor(data)


def rescale(x: ImageTensor, d: int) -> ImageTensor:
    """Force both axes to d (aspect ratio not preserved); identity is bit-exact."""
    if d < 1:
        raise ValidationError(f"rescale dimension must be >= 1, got {d}")
    return _resize(x, d, d)


def rescale_n_patchify(x: ImageTensor, d_rescale: int, d_patch: int) -> PatchGrid:
    """Rescale to d_rescale x d_rescale and tile into (d_rescale/d_patch)^2 patches."""
    if d_rescale < 1 or d_patch < 1:
        raise ConfigurationError(
            f"rescale/patch dimensions must be >= 1, got {d_rescale}/{d_patch}"
        )
    if d_rescale % d_patch:
        raise ConfigurationError(
            f"d_rescale={d_rescale} is not divisible by d_patch={d_patch}"
        )
    resized = rescale(x, d_rescale)
    k = d_rescale // d_patch
    patches = []
    for r in range(k):
        for c in range(k):
            block = resized.data[:, r * d_patch : (r + 1) * d_patch, c * d_patch : (c + 1) * d_patch]
            patches.append(ImageTensor(block))
    return PatchGrid(
        patches=tuple(patches), grid_rows=k, grid_cols=k, source_dims=(d_rescale, d_rescale)
    )


def corrupt(x: ImageTensor, c: CorruptionSpec) -> ImageTensor:
    """Apply one corruption; output dimensions always equal the input's."""
    if c.kind == "jpeg":
        return _jpeg_roundtrip(x, int(c.parameter))
    if c.kind == "center_crop":
        return _center_crop_resize(x, float(c.parameter))
    return _add_noise(x, float(c.parameter), c.seed)


def _jpeg_roundtrip(x: ImageTensor, quality: int) -> ImageTensor:
    as_u8 = np.clip(np.round(x.data * 255.0), 0, 255).astype(np.uint8)
    if x.channels == 1:
        pil = Image.fromarray(as_u8[0], mode="L")
    else:
        pil = Image.fromarray(as_u8.transpose(1, 2, 0))
    buf = io.BytesIO()
    pil.save(buf, format="JPEG", quality=quality)
    buf.seek(0)
    decoded = np.asarray(Image.open(buf), dtype=np.float64) / 255.0
    if decoded.ndim == 2:
        decoded = np.repeat(decoded[None], x.channels, axis=0)
    else:
        decoded = decoded.transpose(2, 0, 1)
    return ImageTensor(decoded)


def _center_crop_resize(x: ImageTensor, ratio: float) -> ImageTensor:
    ch = max(1, round(ratio * x.height))
    cw = max(1, round(ratio * x.width))
    if (ch, cw) == (x.height, x.width):
        return x
    top = (x.height - ch) // 2
    left = (x.width - cw) // 2
    cropped = ImageTensor(x.data[:, top : top + ch, left : left + cw])
    return _resize(cropped, x.height, x.width)


def _add_noise(x: ImageTensor, sigma: float, seed: int) -> ImageTensor:
    rng = np.random.default_rng(seed)
    noisy = x.data + sigma * rng.standard_normal(x.data.shape)
    return ImageTensor(np.clip(noisy, 0.0, 1.0))
