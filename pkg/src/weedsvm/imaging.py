"""Image loading, color-space conversion and gray-level quantization.

All pixel data is numpy-backed.  RGB/HSV channels live in [0, 1] (hue
normalized so a full turn maps to 1); gray images hold integer levels in
[0, levels).
"""

from dataclasses import dataclass
from pathlib import Path

import numpy as np
from PIL import Image, UnidentifiedImageError

from .errors import ImageLoadError, ParameterError, UnsupportedFormatError

# ITU-R BT.601 luminance weights; the usual convention for 8-bit imagery.
LUMA_WEIGHTS = (0.299, 0.587, 0.114)

MAX_GRAY_LEVELS = 65536


@dataclass(frozen=True, eq=False)
class RgbImage:
    """Height x width x 3 float64 pixels, each channel in [0, 1]."""

    pixels: np.ndarray

    def __post_init__(self):
        p = self.pixels
        if p.ndim != 3 or p.shape[2] != 3 or p.shape[0] < 1 or p.shape[1] < 1:
            raise ParameterError(f"RGB pixel grid must be HxWx3, got shape {p.shape}")
        if p.min() < 0.0 or p.max() > 1.0:
            raise ParameterError("RGB channel values must lie in [0, 1]")

    @property
    def height(self):
        return self.pixels.shape[0]

    @property
    def width(self):
        return self.pixels.shape[1]


@dataclass(frozen=True, eq=False)
class HsvImage:
    """Height x width x 3 float64 pixels; h, s, v each in [0, 1].

    Achromatic pixels (s == 0) store h == 0 by convention.
    """

    pixels: np.ndarray

    def __post_init__(self):
        p = self.pixels
        if p.ndim != 3 or p.shape[2] != 3 or p.shape[0] < 1 or p.shape[1] < 1:
            raise ParameterError(f"HSV pixel grid must be HxWx3, got shape {p.shape}")
        if p.min() < 0.0 or p.max() > 1.0:
            raise ParameterError("HSV channel values must lie in [0, 1]")

    @property
    def height(self):
        return self.pixels.shape[0]

    @property
    def width(self):
        return self.pixels.shape[1]


@dataclass(frozen=True, eq=False)
class GrayImage:
    """Height x width int32 pixel levels in [0, levels)."""

    pixels: np.ndarray
    levels: int

    def __post_init__(self):
        if self.levels < 2:
            raise ParameterError(f"need at least 2 gray levels, got {self.levels}")
        p = self.pixels
        if p.ndim != 2 or p.shape[0] < 1 or p.shape[1] < 1:
            raise ParameterError(f"gray pixel grid must be HxW, got shape {p.shape}")
        if p.min() < 0 or p.max() >= self.levels:
            raise ParameterError(f"gray values must lie in [0, {self.levels})")

    @property
    def height(self):
        return self.pixels.shape[0]

    @property
    def width(self):
        return self.pixels.shape[1]


def load_image(path) -> RgbImage:
    """Load a raster image (PNG/JPEG/TIFF at least) as an RgbImage.

    8-bit sources are scaled by 1/255, 16-bit ones by 1/65535.
    """
    path = Path(path)
    try:
        with Image.open(path) as im:
            return _decode(im)
    except UnidentifiedImageError as exc:
        fmt = path.suffix.lstrip(".") or "unknown"
        raise UnsupportedFormatError(f"cannot decode {path}: unsupported format '{fmt}'") from exc
    except (FileNotFoundError, PermissionError, OSError) as exc:
        if isinstance(exc, UnsupportedFormatError):
            raise
        raise ImageLoadError(f"cannot read image file {path}: {exc}") from exc


def _decode(im) -> RgbImage:
    if im.mode in ("I;16", "I;16L", "I;16B", "I;16N"):
        arr = np.asarray(im, dtype=np.float64) / 65535.0
        rgb = np.repeat(arr[:, :, None], 3, axis=2)
    elif im.mode == "I":
        # 32-bit integer grayscale; PNG/TIFF use it for 16-bit payloads.
        arr = np.asarray(im, dtype=np.float64) / 65535.0
        rgb = np.repeat(np.clip(arr, 0.0, 1.0)[:, :, None], 3, axis=2)
    else:
        arr = np.asarray(im.convert("RGB"), dtype=np.float64)
        rgb = arr / 255.0
    return RgbImage(rgb)


def rgb_to_hsv(img: RgbImage) -> HsvImage:
    """Standard hexcone RGB -> HSV with every channel in [0, 1]."""
    r = img.pixels[:, :, 0]
    g = img.pixels[:, :, 1]
    b = img.pixels[:, :, 2]
    maxc = np.maximum(np.maximum(r, g), b)
    minc = np.minimum(np.minimum(r, g), b)
    v = maxc
    c = maxc - minc
    s = np.zeros_like(maxc)
    nonzero = maxc > 0
    s[nonzero] = c[nonzero] / maxc[nonzero]

    h = np.zeros_like(maxc)
    chrom = c > 0
    safe_c = np.where(chrom, c, 1.0)
    r_is_max = chrom & (maxc == r)
    g_is_max = chrom & ~r_is_max & (maxc == g)
    b_is_max = chrom & ~r_is_max & ~g_is_max
    h[r_is_max] = np.mod((g - b)[r_is_max] / safe_c[r_is_max], 6.0)
    h[g_is_max] = (b - r)[g_is_max] / safe_c[g_is_max] + 2.0
    h[b_is_max] = (r - g)[b_is_max] / safe_c[b_is_max] + 4.0
    h = h / 6.0
    # mod can land exactly on 6.0/6 for values epsilon-below a full turn
    h[h >= 1.0] = 0.0
    return HsvImage(np.stack([h, s, v], axis=2))


def to_gray(img: RgbImage, levels: int = 256) -> GrayImage:
    """Quantize BT.601 luminance to `levels` integer gray levels."""
    if not (2 <= levels <= MAX_GRAY_LEVELS):
        raise ParameterError(f"levels must be in [2, {MAX_GRAY_LEVELS}], got {levels}")
    wr, wg, wb = LUMA_WEIGHTS
    y = img.pixels[:, :, 0] * wr + img.pixels[:, :, 1] * wg + img.pixels[:, :, 2] * wb
    q = np.floor(y * (levels - 1) + 0.5).astype(np.int32)
    return GrayImage(q, levels)
