import numpy as np
import pytest

from weedsvm.errors import ParameterError
from weedsvm.svm.core import KernelSpec, TrainedBinarySvm, predict as binary_predict
from weedsvm.svm.multiclass import (
    BinaryMember,
    MulticlassModel,
    fit_standardizer,
    predict_class,
    predict_classes,
    train_multiclass,
)


def clouds(rng, centers, n_per=10, spread=0.1):
    xs, labels = [], []
    for name, center in centers.items():
        xs.append(np.asarray(center) + rng.normal(0, spread, (n_per, len(center))))
        labels += [name] * n_per
    return np.vstack(xs), labels


def constant_decision_binary(value, dim=2):
    """Single support vector at the origin: linear decision == bias."""
    return TrainedBinarySvm(
        x=np.zeros((1, dim)), y=np.array([1.0]), alphas=np.array([1.0]),
        bias=value, kernel=KernelSpec.linear(), c=1.0,
    )


class TestStandardizer:
    def test_constant_feature_passes_through_centered(self):
        x = np.full((4, 3), 7.0)
        s = fit_standardizer(x)
        assert np.array_equal(s.scale, np.ones(3))
        assert np.array_equal(s.transform(x), np.zeros((4, 3)))

    def test_two_point_feature(self):
        s = fit_standardizer(np.array([[0.0], [2.0]]))
        assert s.mean[0] == 1.0 and s.scale[0] == 1.0
        assert np.array_equal(s.transform(np.array([[0.0], [2.0]])).ravel(), [-1.0, 1.0])

    def test_self_transform_is_zero_mean_unit_std(self, rng):
        x = rng.normal(3, 5, (50, 4))
        z = fit_standardizer(x).transform(x)
        assert z.mean(axis=0) == pytest.approx(np.zeros(4), abs=1e-12)
        assert z.std(axis=0) == pytest.approx(np.ones(4), abs=1e-12)

    def test_needs_two_vectors(self):
        with pytest.raises(ParameterError):
            fit_standardizer(np.ones((1, 3)))


class TestTrainMulticlass:
    def test_ovo_binary_count_for_four_classes(self, rng):
        x, labels = clouds(rng, {"a": (0, 0), "b": (5, 0), "c": (0, 5), "d": (5, 5)})
        model = train_multiclass(x, labels, strategy="ovo", seed=1)
        assert len(model.binaries) == 6
        pairs = {(b.positive, b.negative) for b in model.binaries}
        assert pairs == {("a", "b"), ("a", "c"), ("a", "d"), ("b", "c"), ("b", "d"), ("c", "d")}

    def test_ova_binary_count_for_four_classes(self, rng):
        x, labels = clouds(rng, {"a": (0, 0), "b": (5, 0), "c": (0, 5), "d": (5, 5)})
        model = train_multiclass(x, labels, strategy="ova", seed=1)
        assert len(model.binaries) == 4
        assert [b.positive for b in model.binaries] == ["a", "b", "c", "d"]
        assert all(b.negative is None for b in model.binaries)

    def test_separated_clouds_classify_perfectly(self, rng):
        x, labels = clouds(rng, {"a": (0, 0), "b": (10, 0), "c": (0, 10)}, spread=0.5)
        for strategy in ("ovo", "ova"):
            model = train_multiclass(x, labels, strategy=strategy, seed=2)
            assert predict_classes(model, x) == labels

    def test_rejects_single_class(self):
        with pytest.raises(ParameterError):
            train_multiclass(np.zeros((4, 2)), ["a"] * 4)

    def test_rejects_unknown_strategy(self, rng):
        x, labels = clouds(rng, {"a": (0, 0), "b": (3, 3)})
        with pytest.raises(ParameterError):
            train_multiclass(x, labels, strategy="dag")

    def test_deterministic_for_fixed_seed(self, rng):
        x, labels = clouds(rng, {"a": (0, 0), "b": (2, 0), "c": (0, 2)}, spread=0.8)
        m1 = train_multiclass(x, labels, seed=5)
        m2 = train_multiclass(x, labels, seed=5)
        for b1, b2 in zip(m1.binaries, m2.binaries):
            assert np.array_equal(b1.model.alphas, b2.model.alphas)
            assert b1.model.bias == b2.model.bias


class TestPredictClass:
    def test_ova_positive_binary_wins(self):
        binaries = (
            BinaryMember("a", None, constant_decision_binary(-0.5)),
            BinaryMember("b", None, constant_decision_binary(0.7)),
            BinaryMember("c", None, constant_decision_binary(-0.1)),
        )
        model = MulticlassModel("ova", ("a", "b", "c"), binaries, None)
        assert predict_class(model, np.zeros(2)) == "b"

    def test_ova_tie_broken_by_class_order(self):
        binaries = (
            BinaryMember("a", None, constant_decision_binary(0.4)),
            BinaryMember("b", None, constant_decision_binary(0.4)),
        )
        model = MulticlassModel("ova", ("a", "b"), binaries, None)
        assert predict_class(model, np.zeros(2)) == "a"

    def test_ovo_strict_majority(self):
        # a beats b and c; b beats c: votes a=2 b=1 c=0
        binaries = (
            BinaryMember("a", "b", constant_decision_binary(0.2)),
            BinaryMember("a", "c", constant_decision_binary(0.9)),
            BinaryMember("b", "c", constant_decision_binary(0.4)),
        )
        model = MulticlassModel("ovo", ("a", "b", "c"), binaries, None)
        assert predict_class(model, np.zeros(2)) == "a"

    def test_ovo_vote_cycle_broken_by_decision_sums(self):
        # a>b (+0.3), c>a (-0.2), b>c (+0.5): one vote each;
        # summed signed decisions: a = 0.3 - 0.2 = 0.1, b = -0.3 + 0.5 = 0.2,
        # c = 0.2 - 0.5 = -0.3 -> b wins
        binaries = (
            BinaryMember("a", "b", constant_decision_binary(0.3)),
            BinaryMember("a", "c", constant_decision_binary(-0.2)),
            BinaryMember("b", "c", constant_decision_binary(0.5)),
        )
        model = MulticlassModel("ovo", ("a", "b", "c"), binaries, None)
        assert predict_class(model, np.zeros(2)) == "b"

    def test_ovo_full_tie_falls_back_to_class_order(self):
        binaries = (
            BinaryMember("a", "b", constant_decision_binary(0.0)),
            BinaryMember("a", "c", constant_decision_binary(0.0)),
            BinaryMember("b", "c", constant_decision_binary(0.0)),
        )
        model = MulticlassModel("ovo", ("a", "b", "c"), binaries, None)
        # zero decisions: positives win every pair -> votes a=2, b=1, c=0
        assert predict_class(model, np.zeros(2)) == "a"

    def test_two_class_reduction_agrees_with_binary(self, rng):
        x, labels = clouds(rng, {"a": (0, 0), "b": (4, 4)}, spread=1.0)
        for strategy in ("ovo", "ova"):
            model = train_multiclass(x, labels, strategy=strategy, seed=3)
            predicted = predict_classes(model, x)
            member = model.binaries[0]
            work = model.standardizer.transform(x)
            for row, name in zip(work, predicted):
                side = binary_predict(member.model, row)
                expected = member.positive if side > 0 else (member.negative or "a")
                if strategy == "ova":
                    # first binary is "a vs rest": positive side means "a"
                    expected = "a" if side > 0 else "b"
                assert name == expected

    def test_dimension_mismatch(self, rng):
        x, labels = clouds(rng, {"a": (0, 0), "b": (3, 3)})
        model = train_multiclass(x, labels, seed=1)
        with pytest.raises(ParameterError):
            predict_class(model, np.zeros(5))

    def test_prediction_uses_training_time_standardizer(self, rng):
        x, labels = clouds(rng, {"a": (0, 0), "b": (6, 0)}, spread=0.3)
        model = train_multiclass(x, labels, seed=4)
        # the whole test block sits far from the training data; refitting
        # the standardizer on it would recentre it onto the boundary
        shifted = rng.normal(0, 0.3, (10, 2)) + np.array([50.0, 0.0])
        assert predict_classes(model, shifted) == ["b"] * 10
        frozen = model.standardizer
        assert np.array_equal(frozen.mean, fit_standardizer(x).mean)

    def test_class_renaming_permutes_outputs(self, rng):
        x, labels = clouds(rng, {"a": (0, 0), "b": (8, 0), "c": (0, 8)}, spread=0.5)
        renamed = {"a": "zebra", "b": "yak", "c": "xerus"}
        m1 = train_multiclass(x, labels, seed=6)
        m2 = train_multiclass(x, [renamed[l] for l in labels], seed=6)
        p1 = predict_classes(m1, x)
        p2 = predict_classes(m2, x)
        assert [renamed[p] for p in p1] == p2

    def test_no_standardize_mode(self, rng):
        x, labels = clouds(rng, {"a": (0, 0), "b": (10, 0)}, spread=0.5)
        model = train_multiclass(x, labels, standardize=False, seed=7)
        assert model.standardizer is None
        assert predict_classes(model, x) == labels
