import json

import numpy as np
import pytest
from scipy import stats

from rumourkit.classifiers import (
    ALGORITHMS,
    TrainConfig,
    fit,
    load_model,
    predict,
    save_model,
)
from rumourkit.classifiers._common import standardize_apply, standardize_fit
from rumourkit.classifiers.boosting import predict_adaboost, train_adaboost
from rumourkit.classifiers.gnb import VAR_SMOOTHING, _joint_log_likelihood, train_gnb
from rumourkit.classifiers.knn import predict_knn, train_knn
from rumourkit.classifiers.linear import predict_logreg, train_logreg

from conftest import blob_data

# small-data recipe: defaults target thousands of rows, synthetic sets need
# a hotter learning rate to move in 100 epochs
MLP_SMALL = dict(learning_rate=0.01, batch_size=32, epochs=100)


def brute_force_knn(train_X, train_y, test_X, k):
    labels = []
    for x in test_X:
        d = np.sum((train_X - x) ** 2, axis=1)
        order = np.argsort(d, kind="stable")[:k]
        votes = int(np.sum(train_y[order]))
        labels.append(1 if 2 * votes >= k else 0)
    return np.array(labels)


class TestKnn:
    def test_agrees_with_brute_force_on_randomized_instances(self):
        rng = np.random.default_rng(42)
        for trial in range(40):
            n = int(rng.integers(5, 40))
            d = int(rng.integers(1, 6))
            k = int(rng.integers(1, n + 1))
            X = rng.normal(size=(n, d)).round(1)  # rounding forces distance ties
            y = rng.integers(0, 2, size=n).astype(np.int64)
            if y.min() == y.max():
                y[0] = 1 - y[0]
            Xq = rng.normal(size=(10, d)).round(1)
            params = train_knn(X, y, k=k)
            got, _ = predict_knn(params, Xq)
            assert np.array_equal(got, brute_force_knn(X, y, Xq, k))

    def test_vote_tie_goes_to_class_one(self):
        X = np.array([[-1.0], [1.0]])
        y = np.array([0, 1])
        params = train_knn(X, y, k=2)
        labels, scores = predict_knn(params, np.array([[0.0]]))
        assert labels[0] == 1
        assert scores[0] == 0.5

    def test_distance_tie_prefers_earlier_row(self):
        X = np.array([[0.0], [0.0], [5.0]])
        y = np.array([1, 0, 0])
        params = train_knn(X, y, k=1)
        labels, _ = predict_knn(params, np.array([[0.0]]))
        assert labels[0] == 1  # row 0 wins the exact tie

    def test_k_one_memorizes(self):
        X, y = blob_data(0, n_per_class=20)
        params = train_knn(X, y, k=1)
        labels, _ = predict_knn(params, X)
        assert np.array_equal(labels, y)

    def test_k_bounds_validated(self):
        X, y = blob_data(0, n_per_class=3)
        with pytest.raises(ValueError):
            train_knn(X, y, k=0)
        with pytest.raises(ValueError):
            train_knn(X, y, k=7)

    def test_score_is_vote_fraction(self):
        X = np.array([[0.0], [0.1], [0.2], [10.0], [10.1]])
        y = np.array([1, 1, 0, 0, 0])
        params = train_knn(X, y, k=3)
        labels, scores = predict_knn(params, np.array([[0.05]]))
        assert labels[0] == 1
        assert scores[0] == pytest.approx(2 / 3)


class TestGaussianNB:
    def test_log_likelihood_matches_closed_form(self):
        rng = np.random.default_rng(3)
        X = rng.normal(size=(60, 4)) * rng.uniform(0.5, 3.0, size=4)
        y = (rng.random(60) < 0.4).astype(np.int64)
        y[:2] = [0, 1]
        params = train_gnb(X, y)
        Xq = rng.normal(size=(9, 4))
        jll = _joint_log_likelihood(params, Xq)
        for c in (0, 1):
            expected = np.log(np.mean(y == c))
            expected += stats.norm.logpdf(
                Xq, loc=params["means"][c], scale=np.sqrt(params["variances"][c])
            ).sum(axis=1)
            assert np.allclose(jll[:, c], expected, rtol=0, atol=1e-9)

    def test_means_are_per_class_averages(self):
        X = np.array([[0.0], [0.1], [10.0], [10.1]])
        y = np.array([0, 0, 1, 1])
        params = train_gnb(X, y)
        assert params["means"][0][0] == pytest.approx(0.05)
        assert params["means"][1][0] == pytest.approx(10.05)

    def test_variance_smoothing_keeps_constant_features_finite(self):
        X = np.array([[1.0, 0.0], [1.0, 1.0], [1.0, 4.0], [1.0, 5.0]])
        y = np.array([0, 0, 1, 1])
        params = train_gnb(X, y)
        assert np.all(params["variances"] > 0)
        cfg = TrainConfig(algorithm="gnb")
        model = fit(X, y, cfg)
        labels, scores = predict(model, X)
        assert np.all(np.isfinite(scores))

    def test_smoothing_scale(self):
        X = np.array([[0.0], [1000.0]])
        y = np.array([0, 1])
        params = train_gnb(X, y)
        assert params["variances"].min() >= VAR_SMOOTHING * 250000 * 0.99

    def test_separated_blobs_classified_perfectly(self):
        X, y = blob_data(1)
        params = train_gnb(X, y)
        from rumourkit.classifiers.gnb import predict_gnb

        labels, scores = predict_gnb(params, X)
        assert np.mean(labels == y) == 1.0
        assert np.all((scores >= 0) & (scores <= 1))


class TestLinearModels:
    def test_untrained_logreg_scores_half(self):
        X, y = blob_data(0, n_per_class=5)
        params = train_logreg(X, y, learning_rate=0.1, batch_size=4,
                              epochs=0, weight_decay=0.0, seed=0)
        _, scores = predict_logreg(params, X)
        assert np.allclose(scores, 0.5)

    def test_logreg_separates_blobs(self):
        X, y = blob_data(2)
        params = train_logreg(X, y, learning_rate=0.05, batch_size=32,
                              epochs=200, weight_decay=0.0, seed=1)
        labels, _ = predict_logreg(params, X)
        assert np.mean(labels == y) >= 0.99

    def test_logreg_weight_decay_shrinks_weights(self):
        X, y = blob_data(3)
        loose = train_logreg(X, y, learning_rate=0.05, batch_size=32,
                             epochs=100, weight_decay=0.0, seed=0)
        tight = train_logreg(X, y, learning_rate=0.05, batch_size=32,
                             epochs=100, weight_decay=0.5, seed=0)
        assert np.linalg.norm(tight["weights"]) < np.linalg.norm(loose["weights"])

    def test_svm_two_point_margins(self):
        from rumourkit.classifiers.linear import predict_svm, train_svm

        X = np.array([[-1.0], [1.0]])
        y = np.array([0, 1])
        params = train_svm(X, y, svm_lambda=1e-2, batch_size=2, epochs=200, seed=0)
        labels, margins = predict_svm(params, X)
        assert labels.tolist() == [0, 1]
        assert margins[0] < 0 < margins[1]

    def test_svm_large_lambda_shrinks_weights(self):
        from rumourkit.classifiers.linear import train_svm

        X, y = blob_data(4)
        loose = train_svm(X, y, svm_lambda=1e-4, batch_size=32, epochs=50, seed=1)
        tight = train_svm(X, y, svm_lambda=10.0, batch_size=32, epochs=50, seed=1)
        assert np.linalg.norm(tight["weights"]) < 0.1 * np.linalg.norm(loose["weights"])

    def test_svm_agrees_with_logreg_on_separable_data(self):
        from rumourkit.classifiers.linear import predict_svm, train_svm

        X, y = blob_data(0)
        svm = train_svm(X, y, svm_lambda=1e-4, batch_size=32, epochs=50, seed=1)
        lr = train_logreg(X, y, learning_rate=0.05, batch_size=32,
                          epochs=200, weight_decay=0.0, seed=1)
        svm_labels, _ = predict_svm(svm, X)
        lr_labels, _ = predict_logreg(lr, X)
        assert np.mean(svm_labels == lr_labels) >= 0.95


class TestAdaBoost:
    def test_separable_1d_solved_in_one_round(self):
        X = np.array([[0.0], [1.0], [2.0], [5.0], [6.0], [7.0]])
        y = np.array([0, 0, 0, 1, 1, 1])
        params = train_adaboost(X, y, boost_rounds=100)
        assert len(params["stumps"]) == 1
        assert params["round_errors"][0] == 0.0
        labels, _ = predict_adaboost(params, X)
        assert np.array_equal(labels, y)

    def test_reversed_polarity_also_one_round(self):
        X = np.array([[0.0], [1.0], [5.0], [6.0]])
        y = np.array([1, 1, 0, 0])
        params = train_adaboost(X, y, boost_rounds=100)
        assert len(params["stumps"]) == 1
        labels, _ = predict_adaboost(params, X)
        assert np.array_equal(labels, y)

    def test_round_errors_never_exceed_half(self):
        rng = np.random.default_rng(11)
        for trial in range(5):
            X = rng.normal(size=(40, 3))
            y = rng.integers(0, 2, size=40).astype(np.int64)
            y[:2] = [0, 1]
            params = train_adaboost(X, y, boost_rounds=25)
            assert all(e <= 0.5 + 1e-12 for e in params["round_errors"])

    def test_xor_needs_multiple_stumps(self):
        X = np.array([[0.0, 0.0], [0.0, 1.0], [1.0, 0.0], [1.0, 1.0]] * 4)
        y = np.array([0, 1, 1, 0] * 4)
        params = train_adaboost(X, y, boost_rounds=50)
        assert len(params["stumps"]) > 1

    def test_uniform_labels_rejected_by_fit_precondition(self):
        X = np.zeros((4, 2))
        y = np.ones(4, dtype=np.int64)
        with pytest.raises(ValueError, match="both classes"):
            fit(X, y, TrainConfig(algorithm="adaboost"))


class TestStandardization:
    def test_zero_variance_column_scales_by_one(self):
        X = np.array([[3.0, 1.0], [3.0, 2.0], [3.0, 3.0]])
        mean, scale = standardize_fit(X)
        assert scale[0] == 1.0
        Z = standardize_apply(X, mean, scale)
        assert np.allclose(Z[:, 0], 0.0)
        assert np.all(np.isfinite(Z))

    def test_standardized_columns_have_unit_variance(self):
        rng = np.random.default_rng(0)
        X = rng.normal(5.0, 3.0, size=(200, 4))
        mean, scale = standardize_fit(X)
        Z = standardize_apply(X, mean, scale)
        assert np.allclose(Z.mean(axis=0), 0.0, atol=1e-12)
        assert np.allclose(Z.std(axis=0), 1.0, atol=1e-12)


def small_config(algorithm: str, seed: int = 0) -> TrainConfig:
    extra = MLP_SMALL if algorithm in ("mlp", "logreg", "svm") else {}
    return TrainConfig(algorithm=algorithm, seed=seed, hidden_sizes=(16, 8), **extra)


class TestFitPredictDispatch:
    @pytest.mark.parametrize("algorithm", ALGORITHMS)
    def test_blobs_learned_by_every_algorithm(self, algorithm):
        X, y = blob_data(0)
        model = fit(X, y, small_config(algorithm))
        labels, scores = predict(model, X)
        assert np.mean(labels == y) >= 0.95, algorithm
        assert labels.shape == scores.shape == y.shape

    @pytest.mark.parametrize("algorithm", ALGORITHMS)
    def test_refit_is_bit_for_bit_deterministic(self, algorithm):
        X, y = blob_data(1, n_per_class=40)
        m1 = fit(X, y, small_config(algorithm, seed=7))
        m2 = fit(X, y, small_config(algorithm, seed=7))
        l1, s1 = predict(m1, X)
        l2, s2 = predict(m2, X)
        assert np.array_equal(l1, l2)
        assert np.array_equal(s1, s2)
        for key, val in m1.params.items():
            if isinstance(val, np.ndarray):
                assert np.array_equal(val, m2.params[key]), (algorithm, key)

    def test_wrong_dim_at_predict_rejected(self):
        X, y = blob_data(0, n_per_class=10)
        model = fit(X, y, small_config("knn"))
        with pytest.raises(ValueError):
            predict(model, np.zeros((2, 5)))

    def test_one_class_training_rejected(self):
        X = np.zeros((4, 2))
        y = np.zeros(4, dtype=np.int64)
        for algorithm in ALGORITHMS:
            with pytest.raises(ValueError):
                fit(X, y, small_config(algorithm))

    def test_nonfinite_training_rejected(self):
        X, y = blob_data(0, n_per_class=5)
        X[0, 0] = np.nan
        with pytest.raises(ValueError):
            fit(X, y, small_config("gnb"))


class TestModelFiles:
    @pytest.mark.parametrize("algorithm", ALGORITHMS)
    def test_round_trip_preserves_predictions(self, algorithm, tmp_path):
        X, y = blob_data(2, n_per_class=30)
        model = fit(X, y, small_config(algorithm, seed=3))
        path = tmp_path / f"{algorithm}.json"
        save_model(model, path)
        back = load_model(path)
        Xq = blob_data(9, n_per_class=15)[0]
        l1, s1 = predict(model, Xq)
        l2, s2 = predict(back, Xq)
        assert np.array_equal(l1, l2), algorithm
        assert np.allclose(s1, s2, rtol=0, atol=1e-7), algorithm

    @pytest.mark.parametrize("algorithm", ALGORITHMS)
    def test_second_save_is_byte_identical(self, algorithm, tmp_path):
        X, y = blob_data(2, n_per_class=20)
        model = fit(X, y, small_config(algorithm, seed=3))
        p1, p2 = tmp_path / "a.json", tmp_path / "b.json"
        save_model(model, p1)
        save_model(load_model(p1), p2)
        assert p1.read_bytes() == p2.read_bytes(), algorithm

    def test_file_is_plain_json_with_format_marker(self, tmp_path):
        X, y = blob_data(0, n_per_class=10)
        model = fit(X, y, small_config("gnb"))
        path = tmp_path / "m.json"
        save_model(model, path)
        obj = json.loads(path.read_text())
        assert obj["format"] == "rumourkit-model.v1"
        assert obj["algorithm"] == "gnb"
        assert obj["input_dim"] == 2

    def test_unknown_format_rejected(self, tmp_path):
        path = tmp_path / "m.json"
        path.write_text('{"format": "other", "algorithm": "gnb"}')
        with pytest.raises(ValueError):
            load_model(path)


class TestTrainConfig:
    def test_unknown_algorithm_rejected(self):
        with pytest.raises(ValueError):
            TrainConfig(algorithm="tarot")

    def test_bounds_validated(self):
        bad = [
            dict(learning_rate=0.0),
            dict(batch_size=0),
            dict(epochs=-1),
            dict(weight_decay=-0.1),
            dict(dropout_p=1.0),
            dict(dropout_p=-0.1),
            dict(k_neighbors=0),
            dict(boost_rounds=0),
            dict(svm_lambda=0.0),
            dict(hidden_sizes=(16,)),
        ]
        for kw in bad:
            with pytest.raises(ValueError):
                TrainConfig(algorithm="mlp", **kw)

    def test_defaults_match_documented_protocol(self):
        cfg = TrainConfig(algorithm="mlp")
        assert cfg.learning_rate == 2e-4
        assert cfg.batch_size == 512
        assert cfg.epochs == 100
        assert cfg.weight_decay == 1e-5
        assert cfg.dropout_p == 0.5
        assert cfg.k_neighbors == 5
        assert cfg.boost_rounds == 100
        assert cfg.svm_lambda == 1e-4
        assert cfg.hidden_sizes == (256, 64)
