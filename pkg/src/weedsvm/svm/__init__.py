from .core import (
    KernelSpec,
    TrainedBinarySvm,
    TrainingSet,
    decision_value,
    decision_values,
    dual_objective,
    kernel_eval,
    kkt_violation,
    predict,
    smo_train,
)
from .multiclass import (
    MulticlassModel,
    Standardizer,
    fit_standardizer,
    predict_class,
    predict_classes,
    train_multiclass,
)

__all__ = [
    "KernelSpec",
    "TrainedBinarySvm",
    "TrainingSet",
    "decision_value",
    "decision_values",
    "dual_objective",
    "kernel_eval",
    "kkt_violation",
    "predict",
    "smo_train",
    "MulticlassModel",
    "Standardizer",
    "fit_standardizer",
    "predict_class",
    "predict_classes",
    "train_multiclass",
]
