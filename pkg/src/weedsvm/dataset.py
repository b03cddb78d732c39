"""Dataset ingestion and the on-disk feature cache.

The expected layout is one subdirectory per class (broadleaf, grass, soil,
soybean), holding the segmented images.  Extraction produces a
comma-delimited cache (id, class, 31 feature columns) plus a JSON sidecar
recording the extraction parameters, and is byte-reproducible for a fixed
manifest and configuration.
"""

import json
import logging
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import __version__
from .errors import (
    DatasetError,
    DatasetLayoutError,
    ExtractionError,
    ParameterError,
    WeedSvmError,
)
from .features.color import color_stats
from .features.glcm import GlcmParams, compute_glcm, haralick_features
from .features.lbp import LbpParams, lbp_histogram
from .features.schema import feature_names
from .imaging import load_image, to_gray

log = logging.getLogger(__name__)

CLASS_NAMES = ("broadleaf", "grass", "soil", "soybean")

# Segment counts of the published collection; drift across dataset
# versions is warned about, not fatal.
PUBLISHED_COUNTS = {"broadleaf": 1191, "grass": 3520, "soil": 3249, "soybean": 7376}

IMAGE_EXTENSIONS = {".png", ".jpg", ".jpeg", ".tif", ".tiff", ".bmp"}


@dataclass(frozen=True)
class DatasetManifest:
    root: Path
    classes: dict  # class name -> sorted list of Paths

    @property
    def counts(self):
        return {name: len(files) for name, files in self.classes.items()}

    @property
    def size(self):
        return sum(len(files) for files in self.classes.values())

    def entries(self):
        """(class, path) pairs in canonical class order, then path order."""
        for name in CLASS_NAMES:
            for path in self.classes[name]:
                yield name, path

    def to_dict(self):
        return {
            "root": str(self.root),
            "classes": {
                name: [p.relative_to(self.root).as_posix() for p in files]
                for name, files in self.classes.items()
            },
        }

    @classmethod
    def from_dict(cls, payload):
        root = Path(payload["root"])
        classes = {
            name: [root / rel for rel in rels]
            for name, rels in payload["classes"].items()
        }
        return cls(root, classes)


def scan_dataset(root) -> DatasetManifest:
    """Build a manifest of the four class directories under `root`.

    Class directories match case-insensitively; files are sorted for
    determinism.  Missing directories and empty classes are errors.
    """
    root = Path(root)
    if not root.is_dir():
        raise DatasetLayoutError(f"dataset root {root} is not a directory")
    subdirs = {p.name.lower(): p for p in root.iterdir() if p.is_dir()}
    classes = {}
    for name in CLASS_NAMES:
        if name not in subdirs:
            raise DatasetLayoutError(f"dataset root {root} has no '{name}' class directory")
        files = sorted(
            (p for p in subdirs[name].iterdir()
             if p.is_file() and p.suffix.lower() in IMAGE_EXTENSIONS),
            key=lambda p: p.name,
        )
        if not files:
            raise DatasetError(f"class directory {subdirs[name]} contains no images")
        classes[name] = files
    manifest = DatasetManifest(root, classes)
    for name, count in manifest.counts.items():
        if count != PUBLISHED_COUNTS[name]:
            log.warning(
                "class %s has %d segments (published collection has %d)",
                name, count, PUBLISHED_COUNTS[name],
            )
    return manifest


def sample_per_class(manifest: DatasetManifest, n: int, seed: int) -> DatasetManifest:
    """Seeded uniform sample of `n` images per class, without replacement."""
    if n < 1:
        raise ParameterError(f"sample size must be >= 1, got {n}")
    rng = np.random.default_rng(seed)
    sampled = {}
    for name in CLASS_NAMES:
        files = manifest.classes[name]
        if len(files) < n:
            raise ParameterError(f"class {name!r} has {len(files)} images, cannot sample {n}")
        chosen = rng.choice(len(files), size=n, replace=False)
        sampled[name] = sorted((files[i] for i in chosen), key=lambda p: p.name)
    return DatasetManifest(manifest.root, sampled)


@dataclass(frozen=True)
class ExtractionConfig:
    gray_levels: int = 256
    glcm: GlcmParams = GlcmParams()
    correlation_normalization: str = "as_printed"
    lbp: LbpParams = LbpParams()

    def to_dict(self):
        return {
            "gray_levels": self.gray_levels,
            "glcm": {
                "distance": self.glcm.distance,
                "angle": self.glcm.angle,
                "symmetric": self.glcm.symmetric,
            },
            "correlation_normalization": self.correlation_normalization,
            "lbp": {
                "points": self.lbp.points,
                "radius": self.lbp.radius,
                "mapping": self.lbp.mapping,
            },
        }

    @property
    def feature_names(self):
        return feature_names(self.lbp.points, self.lbp.mapping)


@dataclass(frozen=True, eq=False)
class FeatureCache:
    """In-memory feature table: one row per image, columns per the schema."""

    ids: tuple
    labels: tuple
    values: np.ndarray
    feature_names: tuple
    config: ExtractionConfig | None = None
    skipped: tuple = field(default=())

    @property
    def columns(self):
        return ("id", "class") + self.feature_names


def extract_image_features(path, config: ExtractionConfig) -> np.ndarray:
    """Full descriptor of one image: color, then GLCM stats, then LBP bins."""
    rgb = load_image(path)
    gray = to_gray(rgb, config.gray_levels)
    color = color_stats(rgb)
    texture = haralick_features(compute_glcm(gray, config.glcm),
                                config.correlation_normalization)
    lbp = lbp_histogram(gray, config.lbp)
    return np.concatenate([color, texture, lbp])


def _extract_one(task):
    index, name, path, config = task
    try:
        return index, extract_image_features(path, config), None
    except WeedSvmError as exc:  # unreadable or degenerate image
        return index, None, f"{path}: {exc}"


def extract_features(manifest: DatasetManifest, config: ExtractionConfig = ExtractionConfig(),
                     jobs: int = 1) -> FeatureCache:
    """Extract every manifest image into a FeatureCache.

    Unreadable or degenerate images are skipped with a warning; row order
    follows the manifest regardless of worker scheduling.
    """
    tasks = [
        (i, name, path, config)
        for i, (name, path) in enumerate(manifest.entries())
    ]
    if not tasks:
        raise ExtractionError("manifest is empty")
    results = [None] * len(tasks)
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            for index, row, error in pool.map(_extract_one, tasks, chunksize=8):
                results[index] = (row, error)
    else:
        for task in tasks:
            index, row, error = _extract_one(task)
            results[index] = (row, error)

    ids, labels, rows, skipped = [], [], [], []
    for (i, name, path, _), (row, error) in zip(tasks, results):
        if error is not None:
            log.warning("skipping %s", error)
            skipped.append(error)
            continue
        ids.append(f"{name}/{path.name}")
        labels.append(name)
        rows.append(row)
    if not rows:
        raise ExtractionError(f"no image in the manifest could be extracted ({len(skipped)} skipped)")
    return FeatureCache(
        ids=tuple(ids), labels=tuple(labels), values=np.vstack(rows),
        feature_names=config.feature_names, config=config, skipped=tuple(skipped),
    )


def save_cache(cache: FeatureCache, path) -> Path:
    """Write the cache as CSV (9 significant digits) plus a JSON sidecar."""
    path = Path(path)
    lines = [",".join(cache.columns)]
    for i, (row_id, label) in enumerate(zip(cache.ids, cache.labels)):
        cells = [row_id, label] + [f"{v:.9g}" for v in cache.values[i]]
        lines.append(",".join(cells))
    path.write_text("\n".join(lines) + "\n", encoding="utf-8", newline="\n")
    meta = {
        "tool": "weedsvm",
        "version": __version__,
        "rows": len(cache.ids),
        "skipped": list(cache.skipped),
        "extraction": cache.config.to_dict() if cache.config else None,
    }
    sidecar_path(path).write_text(
        json.dumps(meta, indent=2, sort_keys=True) + "\n", encoding="utf-8", newline="\n"
    )
    return path


def sidecar_path(path) -> Path:
    return Path(path).with_suffix(".meta.json")


def load_cache(path) -> FeatureCache:
    """Read a cache written by save_cache."""
    path = Path(path)
    text = path.read_text(encoding="utf-8")
    lines = [line for line in text.split("\n") if line]
    if not lines:
        raise ExtractionError(f"feature cache {path} is empty")
    header = lines[0].split(",")
    if header[:2] != ["id", "class"]:
        raise ExtractionError(f"feature cache {path} has an unexpected header")
    names = tuple(header[2:])
    ids, labels, rows = [], [], []
    for line in lines[1:]:
        cells = line.split(",")
        if len(cells) != len(header):
            raise ExtractionError(f"feature cache {path} has a malformed row: {line[:60]}...")
        ids.append(cells[0])
        labels.append(cells[1])
        rows.append([float(c) for c in cells[2:]])
    if len(set(ids)) != len(ids):
        raise ExtractionError(f"feature cache {path} contains duplicate ids")
    return FeatureCache(
        ids=tuple(ids), labels=tuple(labels),
        values=np.asarray(rows, dtype=np.float64), feature_names=names,
    )
