from .color import color_stats
from .glcm import Glcm, GlcmParams, compute_glcm, haralick_features
from .lbp import LbpParams, lbp_code, lbp_histogram, ri_label, riu2_label, ror, uniformity
from .schema import COLOR_FEATURE_NAMES, GLCM_FEATURE_NAMES, feature_names, group_spans, lbp_feature_names

__all__ = [
    "color_stats",
    "Glcm",
    "GlcmParams",
    "compute_glcm",
    "haralick_features",
    "LbpParams",
    "lbp_code",
    "lbp_histogram",
    "ri_label",
    "riu2_label",
    "ror",
    "uniformity",
    "COLOR_FEATURE_NAMES",
    "GLCM_FEATURE_NAMES",
    "feature_names",
    "group_spans",
    "lbp_feature_names",
]
