"""Color descriptor: mean and population std of each RGB and HSV band."""

import numpy as np

from ..imaging import RgbImage, rgb_to_hsv


def color_stats(img: RgbImage) -> np.ndarray:
    """12-vector (mean_R, std_R, ..., mean_V, std_V).

    Standard deviations are population (divide by N) ones; with channels in
    [0, 1] the stds are bounded by 0.5.
    """
    hsv = rgb_to_hsv(img)
    out = np.empty(12, dtype=np.float64)
    k = 0
    for plane in (img.pixels, hsv.pixels):
        for band in range(3):
            values = plane[:, :, band]
            lo, hi = values.min(), values.max()
            if lo == hi:  # constant band: exact mean, exactly zero spread
                out[k] = lo
                out[k + 1] = 0.0
            else:
                out[k] = values.mean()
                out[k + 1] = values.std()
            k += 2
    return out
