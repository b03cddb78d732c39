"""Circular local binary patterns with rotation-invariant uniform mapping.

Neighbors are sampled on a circle and bilinearly interpolated at non-integer
coordinates.  For neighbor counts divisible by 4 the sampling offsets are
built from one quadrant by exact 90-degree rotations, which makes the riu2
histogram exactly invariant under 90-degree image rotations.
"""

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .. import _backend
from ..errors import DegenerateInputError, OutOfBoundsError, ParameterError
from ..imaging import GrayImage

MAPPINGS = ("raw", "ri", "riu2")

# Interpolated samples of integer-valued pixels carry rounding noise far
# below 1e-9 while genuinely distinct samples differ by much more, so the
# comparison sample >= center - SLACK implements s(0) = 1 robustly.
THRESHOLD_SLACK = 1e-9

_SNAP = 1e-9  # offsets this close to an integer grid point are exact hits

_CHUNK = 1 << 20


@dataclass(frozen=True)
class LbpParams:
    points: int = 8
    radius: float = 1.0
    mapping: str = "riu2"

    def __post_init__(self):
        if not (4 <= self.points <= 24):
            raise ParameterError(f"points must be in [4, 24], got {self.points}")
        if self.radius <= 0:
            raise ParameterError(f"radius must be > 0, got {self.radius}")
        if self.mapping not in MAPPINGS:
            raise ParameterError(f"mapping must be one of {MAPPINGS}, got {self.mapping!r}")

    @property
    def border(self):
        return int(math.ceil(self.radius))

    @property
    def bins(self):
        if self.mapping == "riu2":
            return self.points + 2
        if self.mapping == "raw":
            return 1 << self.points
        return ri_class_count(self.points)


def ror(code: int, shift: int, points: int) -> int:
    """Circular bit-wise right shift of `code` within `points` bits."""
    _check_code(code, points)
    shift %= points
    mask = (1 << points) - 1
    return ((code >> shift) | (code << (points - shift))) & mask


def ri_label(code: int, points: int) -> int:
    """Minimum of `code` over all circular rotations."""
    _check_code(code, points)
    return min(ror(code, k, points) for k in range(points))


def uniformity(code: int, points: int) -> int:
    """Number of circular 0-1 / 1-0 transitions in the bit pattern."""
    _check_code(code, points)
    return (code ^ ror(code, 1, points)).bit_count()


def riu2_label(code: int, points: int) -> int:
    """Set-bit count for uniform codes (at most 2 transitions), else points+1."""
    if uniformity(code, points) <= 2:
        return code.bit_count()
    return points + 1


def ri_class_count(points: int) -> int:
    """Number of distinct rotation classes of `points`-bit codes."""
    total = 0
    for d in range(1, points + 1):
        if points % d == 0:
            total += _euler_phi(d) * (1 << (points // d))
    return total // points


def _euler_phi(n):
    result = n
    p = 2
    while p * p <= n:
        if n % p == 0:
            while n % p == 0:
                n //= p
            result -= result // p
        p += 1
    if n > 1:
        result -= result // n
    return result


def _check_code(code, points):
    if not (0 <= code < (1 << points)):
        raise ParameterError(f"code must be in [0, 2^{points}), got {code}")


@lru_cache(maxsize=16)
def _sample_table(points, radius):
    """Per-sample bilinear corner offsets and weights.

    Sample m sits at angle 2*pi*m/points counterclockwise from the positive
    x axis (x right, y up; row offsets are therefore negated y).  When a
    bilinear coordinate is integral the unused corner is clamped onto the
    used one with weight zero, so every read stays within ceil(radius) of
    the center.
    """
    offsets = []
    if points % 4 == 0:
        quarter = points // 4
        base = [
            (radius * math.cos(2.0 * math.pi * k / points),
             radius * math.sin(2.0 * math.pi * k / points))
            for k in range(quarter)
        ]
        for m in range(points):
            cx, cy = base[m % quarter]
            for _ in range(m // quarter):
                cx, cy = -cy, cx  # exact 90-degree rotation
            offsets.append((cx, -cy))
    else:
        offsets = [
            (radius * math.cos(2.0 * math.pi * m / points),
             -radius * math.sin(2.0 * math.pi * m / points))
            for m in range(points)
        ]

    cols = {k: np.empty(points, dtype=np.int32) for k in ("y00", "x00", "y01", "x01",
                                                          "y10", "x10", "y11", "x11")}
    weights = {k: np.empty(points, dtype=np.float64) for k in ("w00", "w01", "w10", "w11")}
    for m, (dx, dy) in enumerate(offsets):
        if abs(dx - round(dx)) < _SNAP:
            dx = float(round(dx))
        if abs(dy - round(dy)) < _SNAP:
            dy = float(round(dy))
        fx = math.floor(dx)
        fy = math.floor(dy)
        tx = dx - fx
        ty = dy - fy
        x1 = fx + 1 if tx > 0.0 else fx
        y1 = fy + 1 if ty > 0.0 else fy
        cols["y00"][m], cols["x00"][m] = fy, fx
        cols["y01"][m], cols["x01"][m] = fy, x1
        cols["y10"][m], cols["x10"][m] = y1, fx
        cols["y11"][m], cols["x11"][m] = y1, x1
        weights["w00"][m] = (1.0 - tx) * (1.0 - ty)
        weights["w01"][m] = tx * (1.0 - ty)
        weights["w10"][m] = (1.0 - tx) * ty
        weights["w11"][m] = tx * ty
    return cols, weights


@lru_cache(maxsize=8)
def _label_table(points, mapping):
    """Label for every raw code, as a dense numpy lookup table."""
    size = 1 << points
    if mapping == "raw":
        return np.arange(size, dtype=np.int64)
    mask = size - 1
    table = np.empty(size, dtype=np.int64)
    for start in range(0, size, _CHUNK):
        codes = np.arange(start, min(start + _CHUNK, size), dtype=np.int64)
        if mapping == "riu2":
            ror1 = ((codes >> 1) | (codes << (points - 1))) & mask
            transitions = _popcount(codes ^ ror1, points)
            bits = _popcount(codes, points)
            table[start:start + codes.shape[0]] = np.where(
                transitions <= 2, bits, points + 1
            )
        else:
            minimum = codes.copy()
            for k in range(1, points):
                rot = ((codes >> k) | (codes << (points - k))) & mask
                np.minimum(minimum, rot, out=minimum)
            table[start:start + codes.shape[0]] = minimum
    if mapping == "ri":
        classes = np.unique(table)
        dense = np.full(size, -1, dtype=np.int64)
        dense[classes] = np.arange(classes.shape[0])
        table = dense[table]
    return table


def _popcount(values, points):
    counts = np.zeros_like(values)
    for k in range(points + 1):
        counts += (values >> k) & 1
    return counts


def lbp_code(img: GrayImage, x_c: int, y_c: int, params: LbpParams = LbpParams()) -> int:
    """LBP code of the pixel at column x_c, row y_c.

    Bit m is set when neighbor sample m >= center (exact ties count).
    """
    border = params.border
    if not (border <= x_c < img.width - border and border <= y_c < img.height - border):
        raise OutOfBoundsError(
            f"center ({x_c}, {y_c}) is within {border} of the border of a "
            f"{img.width}x{img.height} image"
        )
    cols, weights = _sample_table(params.points, params.radius)
    g = img.pixels.astype(np.float64)
    center = g[y_c, x_c]
    code = 0
    for m in range(params.points):
        sample = (g[y_c + cols["y00"][m], x_c + cols["x00"][m]] * weights["w00"][m]
                  + g[y_c + cols["y01"][m], x_c + cols["x01"][m]] * weights["w01"][m]
                  + g[y_c + cols["y10"][m], x_c + cols["x10"][m]] * weights["w10"][m]
                  + g[y_c + cols["y11"][m], x_c + cols["x11"][m]] * weights["w11"][m])
        if sample >= center - THRESHOLD_SLACK:
            code |= 1 << m
    return code


def lbp_histogram(img: GrayImage, params: LbpParams = LbpParams()) -> np.ndarray:
    """Normalized histogram of mapped LBP labels over all interior pixels.

    Border pixels (closer than ceil(radius) to an edge) have no full
    neighborhood and are excluded.
    """
    border = params.border
    if img.height <= 2 * border or img.width <= 2 * border:
        raise DegenerateInputError(
            f"{img.height}x{img.width} image has no interior pixels at radius {params.radius}"
        )
    cols, weights = _sample_table(params.points, params.radius)
    codes = _backend.lbp_code_map(
        np.ascontiguousarray(img.pixels, dtype=np.float64),
        border,
        cols["y00"], cols["x00"], cols["y01"], cols["x01"],
        cols["y10"], cols["x10"], cols["y11"], cols["x11"],
        weights["w00"], weights["w01"], weights["w10"], weights["w11"],
        THRESHOLD_SLACK,
    )
    labels = _label_table(params.points, params.mapping)[codes.ravel()]
    hist = np.bincount(labels, minlength=params.bins).astype(np.float64)
    return hist / hist.sum()
