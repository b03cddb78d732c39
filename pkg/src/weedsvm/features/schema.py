"""The feature-vector schema: named slots in a fixed order.

The descriptor is always laid out as 12 color slots, then 9 GLCM slots,
then the LBP histogram (10 slots for the default riu2 mapping with 8
neighbors).  Everything downstream - the CSV cache, column selection for
experiments, model dimensionality - keys off this module.
"""

COLOR_FEATURE_NAMES = (
    "mean_R", "std_R",
    "mean_G", "std_G",
    "mean_B", "std_B",
    "mean_H", "std_H",
    "mean_S", "std_S",
    "mean_V", "std_V",
)

GLCM_FEATURE_NAMES = (
    "glcm_energy",
    "glcm_contrast",
    "glcm_entropy",
    "glcm_homogeneity",
    "glcm_correlation",
    "glcm_mean",
    "glcm_std",
    "glcm_skewness",
    "glcm_kurtosis",
)

FEATURE_GROUPS = ("color", "glcm", "lbp")


def lbp_feature_names(points=8, mapping="riu2"):
    if mapping == "riu2":
        count = points + 2
    elif mapping == "raw":
        count = 1 << points
    elif mapping == "ri":
        from .lbp import ri_class_count
        count = ri_class_count(points)
    else:
        raise ValueError(f"unknown LBP mapping {mapping!r}")
    return tuple(f"lbp_{mapping}_{k}" for k in range(count))


def feature_names(points=8, mapping="riu2"):
    """Full ordered feature-name tuple (color + glcm + lbp)."""
    return COLOR_FEATURE_NAMES + GLCM_FEATURE_NAMES + lbp_feature_names(points, mapping)


def group_spans(names):
    """Map each feature group to its (start, stop) slice in `names`.

    Groups are contiguous by construction; a group missing from `names`
    maps to an empty span.
    """

    def prefix_of(name):
        if name.startswith("glcm_"):
            return "glcm"
        if name.startswith("lbp_"):
            return "lbp"
        return "color"

    spans = {}
    for idx, name in enumerate(names):
        group = prefix_of(name)
        start, stop = spans.get(group, (idx, idx))
        if group in spans and idx != stop:
            raise ValueError(f"feature group {group!r} is not contiguous in the schema")
        spans[group] = (start, idx + 1)
    return {g: spans.get(g, (0, 0)) for g in FEATURE_GROUPS}
