"""Versioned JSON serialization of multiclass models.

Only support vectors are persisted (zero multipliers never enter the
decision function), so a round-trip predicts identically to the original
model.  The format is plain JSON for auditability.
"""

import json
from pathlib import Path

import numpy as np

from .errors import ModelFormatError
from .svm.core import KernelSpec, TrainedBinarySvm
from .svm.multiclass import BinaryMember, MulticlassModel, Standardizer

FORMAT_VERSION = 1


def _kernel_to_dict(k: KernelSpec):
    return {key: value for key, value in vars(k).items() if value is not None}


def _kernel_from_dict(payload):
    return KernelSpec(**payload)


def save_model(model: MulticlassModel, path) -> Path:
    path = Path(path)
    binaries = []
    for member in model.binaries:
        svm = member.model.support_only()
        binaries.append({
            "positive": member.positive,
            "negative": member.negative,
            "kernel": _kernel_to_dict(svm.kernel),
            "c": svm.c,
            "bias": svm.bias,
            "converged": svm.converged,
            "sv_alphas": svm.alphas.tolist(),
            "sv_labels": svm.y.tolist(),
            "sv_vectors": svm.x.tolist(),
        })
    payload = {
        "format_version": FORMAT_VERSION,
        "kind": "weedsvm-multiclass",
        "strategy": model.strategy,
        "classes": list(model.classes),
        "standardizer": None if model.standardizer is None else {
            "mean": model.standardizer.mean.tolist(),
            "scale": model.standardizer.scale.tolist(),
        },
        "binaries": binaries,
    }
    path.write_text(json.dumps(payload, indent=2) + "\n", encoding="utf-8", newline="\n")
    return path


def load_model(path) -> MulticlassModel:
    path = Path(path)
    try:
        payload = json.loads(path.read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as exc:
        raise ModelFormatError(f"cannot parse model file {path}: {exc}") from exc
    if not isinstance(payload, dict) or payload.get("kind") != "weedsvm-multiclass":
        raise ModelFormatError(f"{path} is not a weedsvm model file")
    version = payload.get("format_version")
    if version != FORMAT_VERSION:
        raise ModelFormatError(
            f"{path} has format version {version!r}; this build reads {FORMAT_VERSION}"
        )
    try:
        standardizer = None
        if payload["standardizer"] is not None:
            standardizer = Standardizer(
                np.asarray(payload["standardizer"]["mean"], dtype=np.float64),
                np.asarray(payload["standardizer"]["scale"], dtype=np.float64),
            )
        members = []
        for raw in payload["binaries"]:
            svm = TrainedBinarySvm(
                x=np.asarray(raw["sv_vectors"], dtype=np.float64),
                y=np.asarray(raw["sv_labels"], dtype=np.float64),
                alphas=np.asarray(raw["sv_alphas"], dtype=np.float64),
                bias=float(raw["bias"]),
                kernel=_kernel_from_dict(raw["kernel"]),
                c=float(raw["c"]),
                converged=bool(raw["converged"]),
            )
            members.append(BinaryMember(raw["positive"], raw["negative"], svm))
        return MulticlassModel(
            strategy=payload["strategy"],
            classes=tuple(payload["classes"]),
            binaries=tuple(members),
            standardizer=standardizer,
        )
    except (KeyError, TypeError, ValueError) as exc:
        raise ModelFormatError(f"model file {path} is truncated or malformed: {exc}") from exc
