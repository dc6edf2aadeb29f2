"""Separable multilevel 2D discrete wavelet transform and high-frequency extraction.

Twelve filter families (see ``_coeffs``), three boundary handlings:

* ``symmetric`` -- half-sample reflection (default; avoids spurious boundary
  detail energy on natural images),
* ``zero`` -- zero extension,
* ``periodic`` -- periodized circular transform (decimates to exactly n/2
  coefficients per axis; energy-preserving for the orthogonal families).

Odd plane dimensions are padded by one trailing row/column (using the boundary
rule) before each level; the pre-pad shape is recorded per level so the inverse
restores the exact original size.
"""

from __future__ import annotations

import json
import math
import os
from dataclasses import dataclass, field

import numpy as np
from numpy.lib.stride_tricks import sliding_window_view

from ..errors import ConfigurationError, StructuralError
from ..image import ImageTensor
from ._coeffs import FILTERS

FAMILIES = tuple(FILTERS)
BOUNDARIES = ("symmetric", "zero", "periodic")

_NP_PAD = {"symmetric": "symmetric", "zero": "constant", "periodic": "wrap"}


@dataclass(frozen=True)
class WaveletSpec:
    """Wavelet family + decomposition depth + boundary handling."""

    family: str
    levels: int
    boundary: str = "symmetric"

    def __post_init__(self):
        if self.family not in FILTERS:
            raise ConfigurationError(
                f"unknown wavelet family {self.family!r}; supported: {', '.join(FAMILIES)}"
            )
        if not isinstance(self.levels, int) or self.levels < 1:
            raise ConfigurationError(f"levels must be an integer >= 1, got {self.levels!r}")
        if self.boundary not in BOUNDARIES:
            raise ConfigurationError(
                f"unknown boundary mode {self.boundary!r}; supported: {', '.join(BOUNDARIES)}"
            )

    @property
    def filters(self):
        """(dec_lo, dec_hi, rec_lo, rec_hi) as float64 arrays."""
        return _filter_bank(self.family)


@dataclass
class WaveletPyramid:
    """Deepest approximation plane plus per-level (LH, HL, HH) detail triples.

    ``details[k]`` holds level k+1 (finest first); ``shapes[k]`` is the
    (H, W) of the plane that level decomposed, so ``shapes[0]`` is the
    original image size.
    """

    approx: np.ndarray
    details: list = field(default_factory=list)
    shapes: list = field(default_factory=list)

    @property
    def levels(self) -> int:
        return len(self.details)


def _filter_bank(family):
    quad = _BANK_CACHE.get(family)
    if quad is None:
        quad = tuple(np.asarray(f, dtype=np.float64) for f in FILTERS[family])
        _BANK_CACHE[family] = quad
    return quad


_BANK_CACHE: dict = {}


def _pad_last(a, before, after, mode):
    pad = [(0, 0)] * (a.ndim - 1) + [(before, after)]
    if mode == "zero":
        return np.pad(a, pad, mode="constant")
    return np.pad(a, pad, mode=_NP_PAD[mode])


def _analyze_last(a, filt, mode):
    """Convolve along the last axis with odd-phase downsampling."""
    n = a.shape[-1]
    taps = len(filt)
    out_len = n // 2 if mode == "periodic" else (n + taps - 1) // 2
    ext = _pad_last(a, taps - 1, taps - 1, mode)
    windows = sliding_window_view(ext, taps, axis=-1)
    return windows[..., 1::2, :][..., :out_len, :] @ filt[::-1]


def _analyze(a, filt, mode, axis):
    if axis == a.ndim - 1:
        return _analyze_last(a, filt, mode)
    return np.moveaxis(_analyze_last(np.moveaxis(a, axis, -1), filt, mode), -1, axis)


def _fold_periodic(full, n, shift):
    """Wrap a linear synthesis buffer onto length n: out[(t - shift) % n] += full[t]."""
    out = np.zeros(full.shape[:-1] + (n,))
    total = full.shape[-1]
    q_lo = math.floor(-shift / n)
    q_hi = math.floor((total - 1 - shift) / n)
    for q in range(q_lo, q_hi + 1):
        lo = shift + q * n
        seg_lo, seg_hi = max(lo, 0), min(lo + n, total)
        if seg_lo < seg_hi:
            out[..., seg_lo - lo : seg_hi - lo] += full[..., seg_lo:seg_hi]
    return out


def _synthesize_last(lo_c, hi_c, rec_lo, rec_hi, mode, out_len):
    """Zero-upsample both branches, convolve with the synthesis pair, and crop."""
    taps = len(rec_lo)
    m = lo_c.shape[-1]
    full = np.zeros(lo_c.shape[:-1] + (2 * m + taps - 1,))
    for j in range(taps):
        full[..., j : j + 2 * m : 2] += rec_lo[j] * lo_c + rec_hi[j] * hi_c
    if mode == "periodic":
        return _fold_periodic(full, out_len, taps - 2)
    return full[..., taps - 2 : taps - 2 + out_len]


def _synthesize(lo_c, hi_c, rec_lo, rec_hi, mode, out_len, axis):
    if axis == lo_c.ndim - 1:
        return _synthesize_last(lo_c, hi_c, rec_lo, rec_hi, mode, out_len)
    moved = _synthesize_last(
        np.moveaxis(lo_c, axis, -1), np.moveaxis(hi_c, axis, -1), rec_lo, rec_hi, mode, out_len
    )
    return np.moveaxis(moved, -1, axis)


def _even(n):
    return n + (n & 1)


def _coeff_len(n, taps, mode):
    n = _even(n)
    return n // 2 if mode == "periodic" else (n + taps - 2) // 2


def max_levels(height, width):
    """Deepest admissible decomposition for an image of the given size."""
    return int(math.floor(math.log2(min(height, width))))


def _check_admissible(x: ImageTensor, spec: WaveletSpec):
    limit = max_levels(x.height, x.width)
    if spec.levels > limit:
        raise ConfigurationError(
            f"{spec.levels} levels too deep for a {x.height}x{x.width} image "
            f"(max admissible: {limit})"
        )


def dwt2_multilevel(x: ImageTensor, spec: WaveletSpec) -> WaveletPyramid:
    """Forward separable transform, applied independently per channel."""
    _check_admissible(x, spec)
    dec_lo, dec_hi, _, _ = spec.filters
    mode = spec.boundary
    cur = x.data
    shapes, details = [], []
    for _ in range(spec.levels):
        shapes.append((cur.shape[1], cur.shape[2]))
        if cur.shape[1] % 2:
            cur = np.moveaxis(_pad_last(np.moveaxis(cur, 1, -1), 0, 1, mode), -1, 1)
        if cur.shape[2] % 2:
            cur = _pad_last(cur, 0, 1, mode)
        lo_w = _analyze(cur, dec_lo, mode, axis=2)
        hi_w = _analyze(cur, dec_hi, mode, axis=2)
        ll = _analyze(lo_w, dec_lo, mode, axis=1)
        hl = _analyze(lo_w, dec_hi, mode, axis=1)
        lh = _analyze(hi_w, dec_lo, mode, axis=1)
        hh = _analyze(hi_w, dec_hi, mode, axis=1)
        details.append((lh, hl, hh))
        cur = ll
    return WaveletPyramid(approx=cur, details=details, shapes=shapes)


def _validate_pyramid(p: WaveletPyramid, spec: WaveletSpec):
    if p.levels != spec.levels or len(p.shapes) != spec.levels:
        raise StructuralError(
            f"pyramid has {p.levels} detail levels / {len(p.shapes)} shapes, "
            f"spec expects {spec.levels}"
        )
    taps = len(spec.filters[0])
    expect = None
    for lvl, (h, w) in enumerate(p.shapes):
        if expect is not None and expect != (h, w):
            raise StructuralError(
                f"level {lvl + 1} input shape {(h, w)} inconsistent with "
                f"level {lvl} coefficient shape {expect}"
            )
        ch, cw = _coeff_len(h, taps, spec.boundary), _coeff_len(w, taps, spec.boundary)
        for name, plane in zip(("LH", "HL", "HH"), p.details[lvl]):
            if plane.shape[1:] != (ch, cw):
                raise StructuralError(
                    f"level {lvl + 1} {name} plane has shape {plane.shape[1:]}, "
                    f"expected {(ch, cw)}"
                )
        expect = (ch, cw)
    if p.approx.shape[1:] != expect:
        raise StructuralError(
            f"approx plane has shape {p.approx.shape[1:]}, expected {expect}"
        )


def idwt2_multilevel(p: WaveletPyramid, spec: WaveletSpec) -> ImageTensor:
    """Inverse transform, restoring the exact pre-transform image size."""
    _validate_pyramid(p, spec)
    _, _, rec_lo, rec_hi = spec.filters
    mode = spec.boundary
    cur = np.asarray(p.approx, dtype=np.float64)
    for lvl in reversed(range(spec.levels)):
        lh, hl, hh = p.details[lvl]
        h_true, w_true = p.shapes[lvl]
        lo_w = _synthesize(cur, hl, rec_lo, rec_hi, mode, _even(h_true), axis=1)
        hi_w = _synthesize(lh, hh, rec_lo, rec_hi, mode, _even(h_true), axis=1)
        cur = _synthesize(lo_w, hi_w, rec_lo, rec_hi, mode, _even(w_true), axis=2)
        cur = cur[:, :h_true, :w_true]
    return ImageTensor(cur)


def high_frequency_component(x: ImageTensor, spec: WaveletSpec) -> ImageTensor:
    """Reconstruction of x with the deepest approximation subband zeroed."""
    p = dwt2_multilevel(x, spec)
    hollow = WaveletPyramid(
        approx=np.zeros_like(p.approx), details=p.details, shapes=p.shapes
    )
    return idwt2_multilevel(hollow, spec)


def low_frequency_component(x: ImageTensor, spec: WaveletSpec) -> ImageTensor:
    """Reconstruction of x with every detail subband zeroed."""
    p = dwt2_multilevel(x, spec)
    smooth = WaveletPyramid(
        approx=p.approx,
        details=[tuple(np.zeros_like(b) for b in d) for d in p.details],
        shapes=p.shapes,
    )
    return idwt2_multilevel(smooth, spec)


def dump_pyramid(p: WaveletPyramid, directory) -> str:
    """Debug dump: raw float32 planes plus a JSON shape manifest.

    Plane order: approx, then per level LH, HL, HH (finest level first).
    Returns the manifest path.
    """
    os.makedirs(directory, exist_ok=True)
    manifest = {"input_shapes": [list(s) for s in p.shapes], "dtype": "float32le", "planes": []}

    def _write(name, plane):
        fname = f"{name}.f32"
        np.asarray(plane, dtype="<f4").tofile(os.path.join(directory, fname))
        manifest["planes"].append({"name": name, "file": fname, "shape": list(plane.shape)})

    _write("approx", p.approx)
    for lvl, (lh, hl, hh) in enumerate(p.details, start=1):
        _write(f"level{lvl}_lh", lh)
        _write(f"level{lvl}_hl", hl)
        _write(f"level{lvl}_hh", hh)
    path = os.path.join(directory, "manifest.json")
    with open(path, "w") as fh:
        json.dump(manifest, fh, indent=2)
    return path


def load_pyramid(directory) -> WaveletPyramid:
    """Inverse of :func:`dump_pyramid` (float32 precision)."""
    with open(os.path.join(directory, "manifest.json")) as fh:
        manifest = json.load(fh)
    planes = {}
    for entry in manifest["planes"]:
        raw = np.fromfile(os.path.join(directory, entry["file"]), dtype="<f4")
        expected = int(np.prod(entry["shape"]))
        if raw.size != expected:
            raise StructuralError(
                f"plane {entry['name']} has {raw.size} values, manifest says {expected}"
            )
        planes[entry["name"]] = raw.reshape(entry["shape"]).astype(np.float64)
    shapes = [tuple(s) for s in manifest["input_shapes"]]
    details = []
    for lvl in range(1, len(shapes) + 1):
        details.append(tuple(planes[f"level{lvl}_{b}"] for b in ("lh", "hl", "hh")))
    return WaveletPyramid(approx=planes["approx"], details=details, shapes=shapes)
