"""Channel-major floating-point image tensor, the pixel carrier for all stages."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ValidationError


@dataclass(frozen=True)
class ImageTensor:
    """Immutable (channels, height, width) float64 array, nominally in [0, 1].

    Values outside [0, 1] are permitted (perturbed pixels are deliberately not
    clipped); NaN/Inf are rejected at construction.
    """

    data: np.ndarray

    def __post_init__(self):
        arr = np.asarray(self.data, dtype=np.float64)
        if arr.ndim != 3:
            raise ValidationError(f"image data must be (C, H, W), got shape {arr.shape}")
        if arr.shape[0] < 1 or arr.shape[1] < 1 or arr.shape[2] < 1:
            raise ValidationError(f"image dimensions must be positive, got {arr.shape}")
        if not np.isfinite(arr).all():
            raise ValidationError("image contains non-finite values")
        arr = arr.copy() if arr is self.data or not arr.flags.owndata else arr
        arr.setflags(write=False)
        object.__setattr__(self, "data", arr)

    @property
    def channels(self) -> int:
        return self.data.shape[0]

    @property
    def height(self) -> int:
        return self.data.shape[1]

    @property
    def width(self) -> int:
        return self.data.shape[2]

    @classmethod
    def constant(cls, value: float, channels: int = 3, height: int = 8, width: int = 8) -> "ImageTensor":
        return cls(np.full((channels, height, width), float(value)))
