"""Seeded splitting, confusion matrices and multi-iteration experiments.

An experiment repeats split/train/score `iterations` times with seeds
base_seed + k and averages accuracy, timing and the confusion matrix.
Everything except the wall-clock timings is a deterministic function of the
feature table and the base seed.
"""

import time
from dataclasses import dataclass, field

import numpy as np

from .errors import ConfigurationError, ParameterError
from .features.schema import FEATURE_GROUPS, group_spans
from .svm.core import DEFAULT_MAX_SWEEPS, KernelSpec
from .svm.multiclass import predict_classes, train_multiclass


@dataclass(frozen=True)
class SplitSpec:
    train_fraction: float
    seed: int
    stratified: bool = True

    def __post_init__(self):
        if not (0.0 < self.train_fraction < 1.0):
            raise ParameterError(f"train fraction must be in (0, 1), got {self.train_fraction}")


def _train_count(n, fraction):
    return int(np.floor(fraction * n + 0.5))  # round half-up


def split(labels, spec: SplitSpec):
    """Seeded shuffle into disjoint, exhaustive (train, test) index arrays.

    Stratified mode splits every class at the fraction independently.
    """
    labels = np.asarray(labels)
    rng = np.random.default_rng(spec.seed)
    if spec.stratified:
        train_parts, test_parts = [], []
        for cls in sorted(set(labels.tolist())):
            idx = np.flatnonzero(labels == cls)
            k = _train_count(idx.shape[0], spec.train_fraction)
            if k == 0 or k == idx.shape[0]:
                raise ParameterError(
                    f"class {cls!r} with {idx.shape[0]} samples has an empty "
                    f"partition at fraction {spec.train_fraction}"
                )
            perm = rng.permutation(idx.shape[0])
            train_parts.append(idx[perm[:k]])
            test_parts.append(idx[perm[k:]])
        train = np.sort(np.concatenate(train_parts))
        test = np.sort(np.concatenate(test_parts))
    else:
        n = labels.shape[0]
        k = _train_count(n, spec.train_fraction)
        if k == 0 or k == n:
            raise ParameterError(f"{n} samples give an empty partition at fraction {spec.train_fraction}")
        perm = rng.permutation(n)
        train = np.sort(perm[:k])
        test = np.sort(perm[k:])
    return train, test


@dataclass(frozen=True, eq=False)
class ConfusionMatrix:
    classes: tuple
    counts: np.ndarray  # row = true class, column = predicted

    @property
    def total(self):
        return int(self.counts.sum())

    @property
    def accuracy(self):
        return float(np.trace(self.counts)) / self.total

    @property
    def row_percent(self):
        sums = self.counts.sum(axis=1, keepdims=True)
        safe = np.where(sums == 0, 1, sums)
        return 100.0 * self.counts / safe


def confusion(predicted, truth, classes) -> ConfusionMatrix:
    """Tally predictions against ground truth over a fixed class order."""
    if len(predicted) != len(truth):
        raise ParameterError(f"{len(predicted)} predictions vs {len(truth)} truths")
    index = {name: i for i, name in enumerate(classes)}
    counts = np.zeros((len(classes), len(classes)), dtype=np.int64)
    for p, t in zip(predicted, truth):
        if p not in index or t not in index:
            raise ParameterError(f"label {p if p not in index else t!r} not in {tuple(classes)}")
        counts[index[t], index[p]] += 1
    return ConfusionMatrix(tuple(classes), counts)


@dataclass(frozen=True, eq=False)
class IterationResult:
    seed: int
    accuracy: float
    train_time: float
    predict_time: float
    matrix: ConfusionMatrix
    converged: bool = True


@dataclass(frozen=True, eq=False)
class ExperimentReport:
    feature_set: tuple
    strategy: str
    train_fraction: float
    c: float
    kernel: KernelSpec
    base_seed: int
    standardize: bool
    classes: tuple
    feature_dim: int
    iterations: tuple = field(default=())

    @property
    def all_converged(self):
        return all(it.converged for it in self.iterations)

    @property
    def mean_accuracy(self):
        return float(np.mean([it.accuracy for it in self.iterations]))

    @property
    def mean_train_time(self):
        return float(np.mean([it.train_time for it in self.iterations]))

    @property
    def mean_predict_time(self):
        return float(np.mean([it.predict_time for it in self.iterations]))

    @property
    def mean_counts(self):
        return np.mean([it.matrix.counts for it in self.iterations], axis=0)

    @property
    def mean_row_percent(self):
        return np.mean([it.matrix.row_percent for it in self.iterations], axis=0)

    def to_dict(self):
        """JSON-ready mirror of the report."""
        return {
            "config": {
                "feature_set": list(self.feature_set),
                "strategy": self.strategy,
                "train_fraction": self.train_fraction,
                "c": self.c,
                "kernel": {k: v for k, v in vars(self.kernel).items() if v is not None},
                "base_seed": self.base_seed,
                "standardize": self.standardize,
                "classes": list(self.classes),
                "feature_dim": self.feature_dim,
            },
            "iterations": [
                {
                    "seed": it.seed,
                    "accuracy": it.accuracy,
                    "train_time_s": it.train_time,
                    "predict_time_s": it.predict_time,
                    "converged": it.converged,
                    "confusion_counts": it.matrix.counts.tolist(),
                }
                for it in self.iterations
            ],
            "aggregate": {
                "mean_accuracy": self.mean_accuracy,
                "mean_train_time_s": self.mean_train_time,
                "mean_predict_time_s": self.mean_predict_time,
                "mean_confusion_counts": self.mean_counts.tolist(),
                "mean_confusion_row_percent": self.mean_row_percent.tolist(),
            },
        }


def select_features(cache, feature_set):
    """Column block for the requested groups, in canonical group order."""
    requested = tuple(g for g in FEATURE_GROUPS if g in set(feature_set))
    unknown = set(feature_set) - set(FEATURE_GROUPS)
    if unknown:
        raise ConfigurationError(f"unknown feature groups {sorted(unknown)}; pick from {FEATURE_GROUPS}")
    if not requested:
        raise ConfigurationError("at least one feature group is required")
    spans = group_spans(cache.feature_names)
    cols = []
    for group in requested:
        start, stop = spans[group]
        if start == stop:
            raise ConfigurationError(f"feature cache has no {group!r} columns")
        cols.extend(range(start, stop))
    return cache.values[:, cols], requested


def run_experiment(cache, feature_set=("color", "glcm", "lbp"), strategy="ovo",
                   train_fraction=0.7, iterations=10, base_seed=42, c=1.0,
                   kernel: KernelSpec = KernelSpec.linear(), standardize=True,
                   stratified=True, max_sweeps=DEFAULT_MAX_SWEEPS) -> ExperimentReport:
    """Split/train/score `iterations` times and aggregate.

    Iteration k derives its split and training seeds from base_seed + k.
    Training time covers all binaries of the ensemble; prediction time is
    measured separately.
    """
    values, requested = select_features(cache, feature_set)
    labels = np.asarray(cache.labels)
    classes = tuple(sorted(set(labels.tolist())))
    results = []
    for k in range(int(iterations)):
        seed = base_seed + k
        train_idx, test_idx = split(labels, SplitSpec(train_fraction, seed, stratified))
        t0 = time.perf_counter()
        model = train_multiclass(values[train_idx], labels[train_idx],
                                 strategy=strategy, c=c, kernel=kernel,
                                 seed=seed, standardize=standardize,
                                 max_sweeps=max_sweeps)
        t_train = time.perf_counter() - t0
        t0 = time.perf_counter()
        predicted = predict_classes(model, values[test_idx])
        t_predict = time.perf_counter() - t0
        matrix = confusion(predicted, labels[test_idx].tolist(), classes)
        results.append(IterationResult(seed, matrix.accuracy, t_train, t_predict,
                                       matrix, model.converged))
    return ExperimentReport(
        feature_set=requested, strategy=strategy, train_fraction=train_fraction,
        c=c, kernel=kernel, base_seed=base_seed, standardize=standardize,
        classes=classes, feature_dim=values.shape[1], iterations=tuple(results),
    )
