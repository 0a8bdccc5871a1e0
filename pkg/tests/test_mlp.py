"""Feed-forward network training and its finite-difference gradient oracle."""

import numpy as np
import pytest

from polyemo.errors import ConfigError, ShapeError
from polyemo.learn import ClassifierSpec, Mlp, gradient_check


def mlp_spec(**hp):
    merged = {"hidden_sizes": (8,), "epochs": 50, "batch_size": 8}
    merged.update(hp)
    seed = merged.pop("seed", 0)
    return ClassifierSpec(kind="mlp", hyperparameters=merged, seed=seed)


class TestGradients:
    def test_small_network_passes_check(self, rng):
        x = rng.normal(size=(4, 3))
        y = rng.integers(0, 2, size=(4, 6)).astype(np.int64)
        err = gradient_check(mlp_spec(hidden_sizes=(5,)), x, y, epsilon=1e-5)
        assert err < 1e-4

    def test_two_hidden_layers(self, rng):
        x = rng.normal(size=(6, 4))
        y = rng.integers(0, 2, size=(6, 6)).astype(np.int64)
        err = gradient_check(mlp_spec(hidden_sizes=(8, 4)), x, y)
        assert err < 1e-4

    def test_several_seeds(self, rng):
        for seed in range(5):
            x = rng.normal(size=(5, 3))
            y = rng.integers(0, 2, size=(5, 6)).astype(np.int64)
            assert gradient_check(mlp_spec(hidden_sizes=(6,), seed=seed), x, y) < 1e-4

    def test_size_limits_enforced(self, rng):
        x = rng.normal(size=(4, 2))
        y = rng.integers(0, 2, size=(4, 2)).astype(np.int64)
        with pytest.raises(ConfigError, match="hidden units"):
            gradient_check(mlp_spec(hidden_sizes=(33,)), x, y)
        x_big = rng.normal(size=(17, 2))
        y_big = rng.integers(0, 2, size=(17, 2)).astype(np.int64)
        with pytest.raises(ConfigError, match="16 samples"):
            gradient_check(mlp_spec(hidden_sizes=(4,)), x_big, y_big)

    def test_zero_network_on_zero_input(self):
        """All-zero weights on all-zero input: hidden gradients vanish, and the
        output bias gradient is exactly (sigmoid(0) - y) averaged over rows."""
        x = np.zeros((3, 2))
        y = np.array([[1, 0], [0, 0], [1, 1]], dtype=float)
        net = Mlp(mlp_spec(hidden_sizes=(4,)))
        net._init_params(2, 2, np.random.default_rng(0))
        for w in net.weights:
            w[:] = 0.0
        grads_w, grads_b = net._gradients(x, y)
        np.testing.assert_array_equal(grads_w[0], 0.0)
        np.testing.assert_array_equal(grads_w[1], 0.0)
        np.testing.assert_array_equal(grads_b[0], 0.0)
        np.testing.assert_allclose(grads_b[1], (0.5 - y).mean(axis=0), atol=1e-15)


class TestLossAndScores:
    def test_loss_is_stable_for_extreme_logits(self):
        from polyemo.learn.mlp import _bce_with_logits

        z = np.array([[1000.0, -1000.0]])
        y = np.array([[1.0, 0.0]])
        assert _bce_with_logits(z, y) == pytest.approx(0.0, abs=1e-12)
        z_bad = np.array([[-1000.0, 1000.0]])
        val = _bce_with_logits(z_bad, y)
        assert np.isfinite(val) and val == pytest.approx(2000.0, rel=1e-9)

    def test_loss_matches_direct_formula(self, rng):
        from polyemo.learn.mlp import _bce_with_logits, _sigmoid

        z = rng.normal(size=(5, 4)) * 3
        y = rng.integers(0, 2, size=(5, 4)).astype(float)
        p = _sigmoid(z)
        want = float(-(y * np.log(p) + (1 - y) * np.log(1 - p)).sum(axis=1).mean())
        assert _bce_with_logits(z, y) == pytest.approx(want, abs=1e-9)

    def test_scores_bounded_and_consistent(self, rng):
        x = rng.normal(size=(20, 3))
        y = rng.integers(0, 2, size=(20, 2)).astype(np.int64)
        model = Mlp(mlp_spec(epochs=10)).fit(x, y)
        scores = model.predict_scores(x)
        assert np.all((scores >= 0) & (scores <= 1))
        np.testing.assert_array_equal(model.predict(x), (scores > 0.5).astype(np.int64))


class TestTraining:
    def blobs(self, rng, n=30):
        """Two well-separated clusters with complementary labels."""
        half = n // 2
        x = np.vstack(
            [rng.normal(loc=-2.0, size=(half, 2)), rng.normal(loc=2.0, size=(half, 2))]
        )
        y = np.vstack(
            [np.tile([1, 0], (half, 1)), np.tile([0, 1], (half, 1))]
        ).astype(np.int64)
        return x, y

    def test_training_reduces_loss(self, rng):
        x, y = self.blobs(rng)
        fresh = Mlp(mlp_spec(epochs=0))
        fresh.fit(x, y)  # epochs=0 leaves the initial weights untouched
        trained = Mlp(mlp_spec(epochs=60)).fit(x, y)
        assert trained.batch_loss(x, y.astype(float)) < fresh.batch_loss(x, y.astype(float))

    def test_fits_separable_clusters(self, rng):
        x, y = self.blobs(rng)
        model = Mlp(mlp_spec(hidden_sizes=(16,), epochs=150)).fit(x, y)
        np.testing.assert_array_equal(model.predict(x), y)

    def test_deterministic_given_seed(self, rng):
        x, y = self.blobs(rng)
        a = Mlp(mlp_spec(seed=11, epochs=20)).fit(x, y)
        b = Mlp(mlp_spec(seed=11, epochs=20)).fit(x, y)
        for wa, wb in zip(a.weights, b.weights):
            np.testing.assert_array_equal(wa, wb)
        for ba, bb in zip(a.biases, b.biases):
            np.testing.assert_array_equal(ba, bb)

    def test_seed_changes_init(self, rng):
        x, y = self.blobs(rng)
        a = Mlp(mlp_spec(seed=0, epochs=0)).fit(x, y)
        b = Mlp(mlp_spec(seed=1, epochs=0)).fit(x, y)
        assert not np.array_equal(a.weights[0], b.weights[0])

    def test_glorot_init_scale(self):
        net = Mlp(mlp_spec(hidden_sizes=(10,)))
        net._init_params(6, 6, np.random.default_rng(0))
        limit = np.sqrt(6.0 / (6 + 10))
        assert np.abs(net.weights[0]).max() <= limit
        assert np.all(net.biases[0] == 0.0)

    def test_predict_dim_check(self, rng):
        x, y = self.blobs(rng)
        model = Mlp(mlp_spec(epochs=1)).fit(x, y)
        with pytest.raises(ShapeError):
            model.predict(np.zeros((2, 5)))
