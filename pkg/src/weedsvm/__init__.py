"""Crop/weed segment classification from color, GLCM and LBP features.

The package extracts a 31-slot descriptor per segmented field image and
trains one-vs-one / one-vs-all ensembles of SMO-optimized soft-margin SVMs,
with an evaluation harness that averages seeded train/test iterations.
"""

__version__ = "0.1.0"

from ._backend import BACKEND

__all__ = ["BACKEND", "__version__"]
