import numpy as np
import pytest

from aefikit.data import Dataset
from aefikit.errors import FitError, MetricError, PredictError
from aefikit.tree import CartConfig, cart_fit, cart_predict, entropy, gini


def make_dataset(X, y):
    X = np.atleast_2d(np.asarray(X, dtype=float))
    if X.shape[0] == 1 and len(np.asarray(y)) > 1:
        X = X.T
    return Dataset(matrix=X, labels=np.asarray(y, dtype=np.int8),
                   row_ids=np.arange(len(y), dtype=np.int64))


class TestImpurity:
    def test_pure_node(self):
        assert gini((10, 0)) == 0.0

    def test_symmetric(self):
        assert gini((5, 5)) == 0.5

    def test_hand_computed(self):
        # 1 - 0.81 - 0.01
        assert gini((9, 1)) == pytest.approx(0.18, abs=1e-12)

    def test_zero_weights_rejected(self):
        with pytest.raises(MetricError):
            gini((0, 0))
        with pytest.raises(MetricError):
            entropy((0.0, 0.0))

    def test_entropy_range(self):
        assert entropy((5, 5)) == pytest.approx(1.0)
        assert entropy((10, 0)) == 0.0


class TestCartFit:
    def test_separable_pair_single_split(self):
        ds = make_dataset([[0.0], [1.0]], [0, 1])
        tree = cart_fit(ds)
        assert tree.n_nodes == 3
        assert cart_predict(tree, [0.0]) == (0, 0.0)
        assert cart_predict(tree, [1.0]) == (1, 1.0)

    def test_pure_labels_single_leaf(self):
        ds = make_dataset([[0.0], [1.0], [2.0]], [1, 1, 1])
        tree = cart_fit(ds)
        assert tree.n_nodes == 1

    def test_weights_concentrated_on_minority(self):
        X = np.array([[0.0], [1.0], [2.0], [3.0]])
        y = np.array([0, 0, 1, 1])
        ds = make_dataset(X, y)
        w = np.array([0.0, 0.0, 0.5, 0.5])
        tree = cart_fit(ds, w)
        # All mass is one class: the root is pure, so everything predicts minority.
        assert tree.n_nodes == 1
        assert np.all(tree.predict_rows(X) == 1)

    def test_leaf_prediction_is_weighted_majority(self):
        rng = np.random.default_rng(0)
        X = rng.normal(size=(60, 3))
        y = rng.integers(0, 2, 60)
        w = rng.random(60)
        ds = make_dataset(X, y)
        tree = cart_fit(ds, w, CartConfig(max_depth=3))
        leaves = tree.leaf_indices(X)
        for leaf in np.unique(leaves):
            members = leaves == leaf
            w1 = float(np.sum(w[members & (y == 1)]))
            w0 = float(np.sum(w[members & (y == 0)]))
            expected = 1 if w1 / (w0 + w1) >= 0.5 else 0
            preds = tree.predict_rows(X[members])
            assert np.all(preds == expected)

    def test_empty_dataset_rejected(self):
        ds = Dataset(matrix=np.zeros((0, 2)), labels=np.zeros(0, dtype=np.int8),
                     row_ids=np.zeros(0, dtype=np.int64))
        with pytest.raises(FitError):
            cart_fit(ds)

    def test_zero_total_weight_rejected(self):
        ds = make_dataset([[0.0], [1.0]], [0, 1])
        with pytest.raises(FitError):
            cart_fit(ds, np.zeros(2))

    def test_max_depth_respected(self):
        rng = np.random.default_rng(1)
        ds = make_dataset(rng.normal(size=(200, 4)), rng.integers(0, 2, 200))
        tree = cart_fit(ds, None, CartConfig(max_depth=2))
        assert tree.depth() <= 2

    def test_min_samples_leaf_respected(self):
        rng = np.random.default_rng(2)
        X = rng.normal(size=(100, 3))
        y = rng.integers(0, 2, 100)
        ds = make_dataset(X, y)
        tree = cart_fit(ds, None, CartConfig(min_samples_leaf=10))
        leaves, counts = np.unique(tree.leaf_indices(X), return_counts=True)
        assert counts.min() >= 10

    def test_zero_training_error_on_distinct_rows(self):
        rng = np.random.default_rng(3)
        X = rng.normal(size=(80, 5))
        y = rng.integers(0, 2, 80)
        ds = make_dataset(X, y)
        tree = cart_fit(ds)
        assert np.all(tree.predict_rows(X) == y)

    def test_impurity_never_increases(self):
        # Recompute each split's weighted impurity from the raw rows.
        rng = np.random.default_rng(4)
        X = np.round(rng.normal(size=(150, 4)), 1)
        y = rng.integers(0, 2, 150)
        w = rng.random(150)
        ds = make_dataset(X, y)
        for criterion in ("gini", "info_gain"):
            tree = cart_fit(ds, w, CartConfig(criterion=criterion))
            impurity = gini if criterion == "gini" else entropy

            def node_rows(node, idx):
                if tree.feature[node] < 0:
                    return
                f, thr = tree.feature[node], tree.threshold[node]
                left = idx[X[idx, f] <= thr]
                right = idx[X[idx, f] > thr]
                for child_idx in (left, right):
                    assert child_idx.size > 0
                wp = w[idx]
                yp = y[idx]
                parent = impurity((wp[yp == 0].sum(), wp[yp == 1].sum())) * wp.sum()
                child_total = 0.0
                for child_idx in (left, right):
                    wc = w[child_idx]
                    yc = y[child_idx]
                    if wc.sum() > 0:
                        child_total += impurity((wc[yc == 0].sum(), wc[yc == 1].sum())) * wc.sum()
                assert child_total <= parent + 1e-9
                node_rows(tree.left[node], left)
                node_rows(tree.right[node], right)

            node_rows(0, np.arange(150))

    def test_deterministic_with_feature_subsample(self):
        rng = np.random.default_rng(5)
        ds = make_dataset(rng.normal(size=(120, 6)), rng.integers(0, 2, 120))
        a = cart_fit(ds, None, CartConfig(feature_subsample=2, seed=77))
        b = cart_fit(ds, None, CartConfig(feature_subsample=2, seed=77))
        assert np.array_equal(a.feature, b.feature)
        assert np.array_equal(a.threshold, b.threshold)

    def test_feature_subsample_exceeding_dim_rejected(self):
        ds = make_dataset([[0.0, 1.0], [1.0, 0.0]], [0, 1])
        with pytest.raises(FitError):
            cart_fit(ds, None, CartConfig(feature_subsample=5))


class TestCartPredict:
    def test_training_rows_reproduced_on_zero_error_tree(self):
        rng = np.random.default_rng(6)
        X = rng.normal(size=(40, 3))
        y = rng.integers(0, 2, 40)
        y[0], y[1] = 0, 1
        ds = make_dataset(X, y)
        tree = cart_fit(ds)
        for i in range(40):
            label, _ = cart_predict(tree, X[i])
            assert label == y[i]

    def test_single_leaf_constant(self):
        ds = make_dataset([[0.0], [1.0]], [1, 1])
        tree = cart_fit(ds)
        assert cart_predict(tree, [-5.0]) == cart_predict(tree, [17.0])

    def test_leaf_fraction(self):
        # Four identical rows cannot split: leaf carries weighted counts (3, 1).
        X = np.zeros((4, 2))
        y = np.array([0, 0, 0, 1])
        ds = make_dataset(X, y)
        tree = cart_fit(ds, np.full(4, 0.25))
        label, p = cart_predict(tree, [0.0, 0.0])
        assert p == pytest.approx(0.25)
        assert label == 0

    def test_dimension_mismatch(self):
        ds = make_dataset([[0.0, 1.0], [1.0, 0.0]], [0, 1])
        tree = cart_fit(ds)
        with pytest.raises(PredictError):
            cart_predict(tree, [1.0])
