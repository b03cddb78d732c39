import numpy as np
import pytest
from PIL import Image

from weedsvm.dataset import CLASS_NAMES


@pytest.fixture
def rng():
    return np.random.default_rng(20240817)


def write_png(path, array_u8):
    """Write an HxWx3 (or HxW) uint8 array as PNG."""
    Image.fromarray(np.asarray(array_u8, dtype=np.uint8)).save(path)
    return path


def synthetic_class_image(rng, name, size=24):
    """Small image with class-distinct color and texture statistics."""
    base = {
        "soil": (150, 95, 60),
        "soybean": (60, 150, 70),
        "grass": (80, 170, 60),
        "broadleaf": (40, 120, 90),
    }[name]
    img = np.tile(np.asarray(base, dtype=np.float64), (size, size, 1))
    noise = rng.normal(0, 6, (size, size, 3))
    if name == "grass":  # strong vertical striping
        stripes = 45.0 * (np.arange(size) % 2)
        img[:, :, 1] += stripes[None, :]
    elif name == "broadleaf":  # smooth blobs
        yy, xx = np.mgrid[0:size, 0:size]
        img[:, :, 1] += 35.0 * np.sin(yy / 5.0) * np.cos(xx / 6.0)
    elif name == "soybean":
        img += rng.normal(0, 14, (size, size, 3))
    return np.clip(img + noise, 0, 255).astype(np.uint8)


@pytest.fixture
def dataset_dir(tmp_path, rng):
    """Four-class dataset fixture with 6 PNGs per class."""
    root = tmp_path / "dataset"
    for name in CLASS_NAMES:
        sub = root / name
        sub.mkdir(parents=True)
        for i in range(6):
            write_png(sub / f"{name}_{i:02d}.png", synthetic_class_image(rng, name))
    return root
