"""Gray-level co-occurrence matrix and its nine texture statistics.

The statistics are energy, contrast, entropy, homogeneity, correlation and
the first four moments of the gray-level difference i - j.  Entropy is
-sum(p log p) with natural log; the odd difference moments are accumulated
per diagonal so they cancel exactly (not merely approximately) on symmetric
matrices.
"""

from dataclasses import dataclass

import numpy as np

from .. import _backend
from ..errors import DegenerateInputError, ParameterError
from ..imaging import GrayImage

DIRECTIONS = (0, 45, 90, 135)

# (row, col) step per direction, before scaling by the distance
_OFFSETS = {0: (0, 1), 45: (-1, 1), 90: (-1, 0), 135: (-1, -1)}

CORRELATION_MODES = ("as_printed", "standard")

# the matrix is stored dense (levels x levels); 4096 caps it at 128 MB
MAX_GLCM_LEVELS = 4096


@dataclass(frozen=True, eq=False)
class GlcmParams:
    distance: int = 1
    angle: int = 0
    symmetric: bool = True

    def __post_init__(self):
        if self.distance < 1:
            raise ParameterError(f"distance must be >= 1, got {self.distance}")
        if self.angle not in DIRECTIONS:
            raise ParameterError(f"angle must be one of {DIRECTIONS}, got {self.angle}")

    @property
    def offset(self):
        dr, dc = _OFFSETS[self.angle]
        return dr * self.distance, dc * self.distance


@dataclass(frozen=True, eq=False)
class Glcm:
    """Normalized co-occurrence matrix with its marginal statistics."""

    p: np.ndarray
    levels: int
    mu_x: float
    mu_y: float
    sigma_x: float
    sigma_y: float
    symmetric: bool


def compute_glcm(img: GrayImage, params: GlcmParams = GlcmParams()) -> Glcm:
    """Count gray-level pairs at the offset implied by (distance, angle).

    In symmetric mode each pair is also counted in the reverse direction.
    The counts are divided by the total number of co-occurrence pairs.
    """
    if img.levels > MAX_GLCM_LEVELS:
        raise ParameterError(
            f"co-occurrence matrix at {img.levels} gray levels would need "
            f"{img.levels}x{img.levels} dense storage; quantize to at most "
            f"{MAX_GLCM_LEVELS} levels first"
        )
    drow, dcol = params.offset
    counts = _backend.glcm_counts(
        np.ascontiguousarray(img.pixels, dtype=np.int32), img.levels, drow, dcol
    )
    if params.symmetric:
        counts = counts + counts.T
    total = counts.sum()
    if total == 0:
        raise DegenerateInputError(
            f"image of {img.height}x{img.width} has no pixel pair at offset "
            f"(drow={drow}, dcol={dcol})"
        )
    p = counts / float(total)
    idx = np.arange(img.levels, dtype=np.float64)
    px = p.sum(axis=1)
    py = p.sum(axis=0)
    mu_x = float(idx @ px)
    mu_y = float(idx @ py)
    sigma_x = float(np.sqrt(((idx - mu_x) ** 2) @ px))
    sigma_y = float(np.sqrt(((idx - mu_y) ** 2) @ py))
    return Glcm(p, img.levels, mu_x, mu_y, sigma_x, sigma_y, params.symmetric)


def _difference_moments(p):
    """Moments 1-4 of the difference d = i - j.

    Accumulated diagonal by diagonal: opposite diagonals of a symmetric
    matrix sum to exactly equal floats, so the odd moments vanish exactly.
    """
    n = p.shape[0]
    m1 = m2 = m3 = m4 = 0.0
    for k in range(1, n):
        q_pos = float(np.trace(p, offset=-k))  # entries with i - j = +k
        q_neg = float(np.trace(p, offset=k))
        odd = q_pos - q_neg
        even = q_pos + q_neg
        m1 += k * odd
        m2 += k**2 * even
        m3 += k**3 * odd
        m4 += k**4 * even
    return m1, m2, m3, m4


def haralick_features(g: Glcm, correlation_normalization: str = "as_printed") -> np.ndarray:
    """The nine GLCM statistics, ordered per GLCM_FEATURE_NAMES.

    correlation_normalization picks the correlation denominator:
    "as_printed" uses sigma_x^2 * sigma_y^2, "standard" the usual
    sigma_x * sigma_y.  Degenerate marginals (constant image) give 0.
    """
    if correlation_normalization not in CORRELATION_MODES:
        raise ParameterError(
            f"correlation_normalization must be one of {CORRELATION_MODES}, "
            f"got {correlation_normalization!r}"
        )
    p = g.p
    idx = np.arange(g.levels, dtype=np.float64)
    diff = idx[:, None] - idx[None, :]

    energy = float((p * p).sum())
    nonzero = p > 0
    entropy = float(-(p[nonzero] * np.log(p[nonzero])).sum()) + 0.0  # avoid -0.0
    homogeneity = float((p / (1.0 + diff * diff)).sum())

    if correlation_normalization == "as_printed":
        denom = g.sigma_x**2 * g.sigma_y**2
    else:
        denom = g.sigma_x * g.sigma_y
    if denom == 0.0:
        correlation = 0.0
    else:
        cov = float((p * (idx[:, None] - g.mu_x) * (idx[None, :] - g.mu_y)).sum())
        correlation = cov / denom

    m1, m2, m3, m4 = _difference_moments(p)
    contrast = m2  # same formula as printed for moment 2

    return np.array(
        [energy, contrast, entropy, homogeneity, correlation, m1, m2, m3, m4],
        dtype=np.float64,
    )
