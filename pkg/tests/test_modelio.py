import json

import numpy as np
import pytest

from weedsvm.errors import ModelFormatError
from weedsvm.modelio import FORMAT_VERSION, load_model, save_model
from weedsvm.svm.core import KernelSpec, TrainingSet, decision_values, smo_train
from weedsvm.svm.multiclass import BinaryMember, MulticlassModel, predict_classes, train_multiclass

from .test_multiclass import clouds


def toy_binary_model():
    data = TrainingSet(np.array([[-1.0, 0.0], [1.0, 0.0]]), np.array([-1.0, 1.0]))
    return smo_train(data, 10.0, KernelSpec.linear(), seed=1)


def test_round_trip_toy_model_decisions_identical(tmp_path, rng):
    binary = toy_binary_model()
    model = MulticlassModel("ova", ("neg", "pos"), (BinaryMember("pos", None, binary),), None)
    path = save_model(model, tmp_path / "toy.json")
    loaded = load_model(path)
    probes = rng.normal(0, 3, (10, 2))
    original = decision_values(model.binaries[0].model, probes)
    restored = decision_values(loaded.binaries[0].model, probes)
    assert np.array_equal(original, restored)


def test_round_trip_q4_ovo_predictions(tmp_path, rng):
    x, labels = clouds(rng, {"a": (0, 0), "b": (6, 0), "c": (0, 6), "d": (6, 6)}, spread=1.0)
    model = train_multiclass(x, labels, strategy="ovo", seed=11)
    assert len(model.binaries) == 6
    loaded = load_model(save_model(model, tmp_path / "q4.json"))
    probes = rng.normal(3, 4, (40, 2))
    assert predict_classes(loaded, probes) == predict_classes(model, probes)
    assert loaded.classes == model.classes
    assert np.array_equal(loaded.standardizer.mean, model.standardizer.mean)
    assert np.array_equal(loaded.standardizer.scale, model.standardizer.scale)


def test_round_trip_keeps_only_support_vectors(tmp_path, rng):
    x, labels = clouds(rng, {"a": (0, 0), "b": (9, 0)}, n_per=15, spread=0.5)
    model = train_multiclass(x, labels, seed=3)
    loaded = load_model(save_model(model, tmp_path / "sv.json"))
    for member, restored in zip(model.binaries, loaded.binaries):
        kept = int(member.model.support_mask.sum())
        assert restored.model.alphas.shape == (kept,)
        assert (restored.model.alphas > 0).all()


def test_round_trip_rbf_and_poly_kernels(tmp_path, rng):
    x, labels = clouds(rng, {"a": (0, 0), "b": (4, 0)}, spread=0.7)
    for spec in (KernelSpec.rbf(0.5), KernelSpec.poly(2, 1.0)):
        model = train_multiclass(x, labels, kernel=spec, seed=5)
        loaded = load_model(save_model(model, tmp_path / "k.json"))
        assert loaded.binaries[0].model.kernel == spec
        probes = rng.normal(2, 2, (12, 2))
        assert predict_classes(loaded, probes) == predict_classes(model, probes)


def test_unknown_version_rejected(tmp_path):
    model = MulticlassModel("ova", ("n", "p"), (BinaryMember("p", None, toy_binary_model()),), None)
    path = save_model(model, tmp_path / "v.json")
    payload = json.loads(path.read_text())
    payload["format_version"] = FORMAT_VERSION + 1
    path.write_text(json.dumps(payload))
    with pytest.raises(ModelFormatError, match="version"):
        load_model(path)


def test_truncated_file_rejected(tmp_path):
    model = MulticlassModel("ova", ("n", "p"), (BinaryMember("p", None, toy_binary_model()),), None)
    path = save_model(model, tmp_path / "t.json")
    raw = path.read_text()
    path.write_text(raw[: len(raw) // 2])
    with pytest.raises(ModelFormatError):
        load_model(path)


def test_missing_field_rejected(tmp_path):
    model = MulticlassModel("ova", ("n", "p"), (BinaryMember("p", None, toy_binary_model()),), None)
    path = save_model(model, tmp_path / "m.json")
    payload = json.loads(path.read_text())
    del payload["binaries"][0]["bias"]
    path.write_text(json.dumps(payload))
    with pytest.raises(ModelFormatError, match="truncated or malformed"):
        load_model(path)


def test_wrong_kind_rejected(tmp_path):
    path = tmp_path / "other.json"
    path.write_text(json.dumps({"kind": "something-else", "format_version": 1}))
    with pytest.raises(ModelFormatError):
        load_model(path)
