"""One-vs-one and one-vs-all ensembles over binary SVMs.

One-vs-one trains a binary SVM per class pair and predicts by majority
vote; one-vs-all trains one SVM per class against the rest and predicts the
largest decision value.  All binaries share a single standardizer fitted on
the full training set.
"""

from dataclasses import dataclass

import numpy as np

from ..errors import ParameterError
from .core import (
    DEFAULT_MAX_SWEEPS,
    KernelSpec,
    TrainedBinarySvm,
    TrainingSet,
    decision_values,
    smo_train,
)

STRATEGIES = ("ovo", "ova")


@dataclass(frozen=True, eq=False)
class Standardizer:
    mean: np.ndarray
    scale: np.ndarray

    def transform(self, x):
        return (x - self.mean) / self.scale

    @property
    def dim(self):
        return self.mean.shape[0]


def fit_standardizer(x: np.ndarray) -> Standardizer:
    """Per-feature mean and population std; constant features get scale 1."""
    x = np.asarray(x, dtype=np.float64)
    if x.ndim != 2 or x.shape[0] < 2:
        raise ParameterError("standardizer needs at least 2 vectors")
    constant = x.min(axis=0) == x.max(axis=0)
    mean = np.where(constant, x[0], x.mean(axis=0))
    scale = np.where(constant, 1.0, x.std(axis=0))
    return Standardizer(mean, scale)


@dataclass(frozen=True, eq=False)
class BinaryMember:
    """One trained binary problem; `negative` is None for one-vs-all."""

    positive: str
    negative: str | None
    model: TrainedBinarySvm


@dataclass(frozen=True, eq=False)
class MulticlassModel:
    strategy: str
    classes: tuple
    binaries: tuple
    standardizer: Standardizer | None

    @property
    def dim(self):
        return self.binaries[0].model.dim

    @property
    def converged(self):
        return all(b.model.converged for b in self.binaries)


def train_multiclass(x, labels, strategy="ovo", c=1.0,
                     kernel: KernelSpec = KernelSpec.linear(), seed: int = 0,
                     standardize: bool = True, tol: float = 1e-3,
                     max_sweeps: int = DEFAULT_MAX_SWEEPS) -> MulticlassModel:
    """Train an ovo or ova ensemble.

    Binary problem k uses seed + k, so the whole ensemble is a
    deterministic function of (data, hyperparameters, seed).
    """
    if strategy not in STRATEGIES:
        raise ParameterError(f"strategy must be one of {STRATEGIES}, got {strategy!r}")
    x = np.asarray(x, dtype=np.float64)
    labels = np.asarray(labels)
    classes = tuple(sorted(set(labels.tolist())))
    if len(classes) < 2:
        raise ParameterError(f"need at least 2 classes, got {classes}")

    standardizer = fit_standardizer(x) if standardize else None
    work = standardizer.transform(x) if standardizer is not None else x

    binaries = []
    if strategy == "ovo":
        k = 0
        for a_idx, pos in enumerate(classes):
            for neg in classes[a_idx + 1:]:
                mask = (labels == pos) | (labels == neg)
                y = np.where(labels[mask] == pos, 1.0, -1.0)
                model = smo_train(TrainingSet(work[mask], y), c, kernel,
                                  tol=tol, seed=seed + k, max_sweeps=max_sweeps)
                binaries.append(BinaryMember(pos, neg, model))
                k += 1
    else:
        for k, pos in enumerate(classes):
            y = np.where(labels == pos, 1.0, -1.0)
            model = smo_train(TrainingSet(work, y), c, kernel, tol=tol,
                              seed=seed + k, max_sweeps=max_sweeps)
            binaries.append(BinaryMember(pos, None, model))
    return MulticlassModel(strategy, classes, tuple(binaries), standardizer)


def predict_classes(m: MulticlassModel, x: np.ndarray) -> list:
    """Predicted class name for every row of x."""
    x = np.asarray(x, dtype=np.float64)
    if x.ndim != 2 or x.shape[1] != m.dim:
        raise ParameterError(f"expected (n, {m.dim}) inputs, got shape {x.shape}")
    if m.standardizer is not None:
        x = m.standardizer.transform(x)
    n = x.shape[0]
    index = {name: i for i, name in enumerate(m.classes)}
    q = len(m.classes)

    if m.strategy == "ovo":
        votes = np.zeros((n, q), dtype=np.int64)
        scores = np.zeros((n, q), dtype=np.float64)
        for member in m.binaries:
            d = decision_values(member.model, x)
            pos, neg = index[member.positive], index[member.negative]
            wins_pos = d >= 0.0
            votes[wins_pos, pos] += 1
            votes[~wins_pos, neg] += 1
            scores[:, pos] += d
            scores[:, neg] -= d
        out = []
        for i in range(n):
            best_votes = votes[i].max()
            tied = np.flatnonzero(votes[i] == best_votes)
            if tied.shape[0] > 1:
                best_score = scores[i, tied].max()
                tied = tied[scores[i, tied] == best_score]
            out.append(m.classes[tied[0]])
        return out

    decisions = np.column_stack([decision_values(b.model, x) for b in m.binaries])
    return [m.classes[int(np.argmax(row))] for row in decisions]


def predict_class(m: MulticlassModel, x) -> str:
    x = np.asarray(x, dtype=np.float64)
    if x.ndim != 1:
        raise ParameterError(f"expected a single vector, got shape {x.shape}")
    return predict_classes(m, x[None, :])[0]
