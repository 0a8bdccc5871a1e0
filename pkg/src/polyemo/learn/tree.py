"""Multi-output CART decision tree and bagged random forest.

Node impurity is the sum of per-label binary Gini values, so one tree
predicts all six emotion outputs jointly. Splits are axis-aligned
thresholds at midpoints between adjacent distinct feature values; the best
split minimizes weighted child impurity, with ties broken toward the lowest
feature index and lowest threshold. A node splits as long as it is impure
and a valid split exists, which lets the tree solve XOR-like label patterns
whose first split has zero immediate gain.
"""

from __future__ import annotations

import numpy as np

from .base import ClassifierSpec, check_input_dim, validate_training_data


class _Node:
    __slots__ = ("feature", "threshold", "left", "right", "value")

    def __init__(self, feature=-1, threshold=0.0, left=None, right=None, value=None):
        self.feature = feature
        self.threshold = threshold
        self.left = left
        self.right = right
        self.value = value  # (n_labels,) 0/1 vector at leaves

    @property
    def is_leaf(self) -> bool:
        return self.value is not None


def _impurity_weighted(prefix, counts_total, n):
    """Weighted child Gini for every split position 1..n-1, vectorized.

    prefix[i] holds per-label positive counts among the first i+1 sorted
    samples. Returns an (n-1,) array of n_left*G_left + n_right*G_right.
    """
    left_n = np.arange(1, n, dtype=float)
    right_n = n - left_n
    left_pos = prefix[:-1].astype(float)
    right_pos = counts_total.astype(float) - left_pos
    # per-label binary gini: 2 p (1-p); summed over labels, weighted by size
    gl = 2.0 * (left_pos * (left_n[:, None] - left_pos) / left_n[:, None]).sum(axis=1) / left_n
    gr = 2.0 * (right_pos * (right_n[:, None] - right_pos) / right_n[:, None]).sum(axis=1) / right_n
    return left_n * gl + right_n * gr


def _best_split_for_feature(values, y, counts_total):
    """Return (weighted_child_impurity, threshold) or None if no valid split."""
    n = values.shape[0]
    order = np.argsort(values, kind="stable")
    vs = values[order]
    distinct = vs[:-1] < vs[1:]
    if not distinct.any():
        return None
    prefix = np.cumsum(y[order], axis=0)
    weighted = _impurity_weighted(prefix, counts_total, n)
    weighted = np.where(distinct, weighted, np.inf)
    best = int(np.argmin(weighted))
    threshold = (vs[best] + vs[best + 1]) / 2.0
    return weighted[best], threshold


def _leaf_value(y) -> np.ndarray:
    # per-label majority; an exact tie goes to 0
    return (2 * y.sum(axis=0) > y.shape[0]).astype(np.int64)


def _grow_tree(x, y, min_samples_split, max_depth, max_features, rng):
    n_features = x.shape[1]
    if max_features is None:
        n_candidates = n_features
    elif max_features == "sqrt":
        n_candidates = max(1, int(np.sqrt(n_features)))
    else:
        n_candidates = max(1, min(int(max_features), n_features))

    root = _Node()
    stack = [(root, np.arange(x.shape[0]), 0)]
    while stack:
        node, idx, depth = stack.pop()
        ys = y[idx]
        n = idx.shape[0]
        counts = ys.sum(axis=0)
        pure = np.all((counts == 0) | (counts == n))
        if pure or n < min_samples_split or (max_depth is not None and depth >= max_depth):
            node.value = _leaf_value(ys)
            continue
        if n_candidates < n_features:
            features = np.sort(rng.choice(n_features, size=n_candidates, replace=False))
        else:
            features = np.arange(n_features)
        best = None  # (weighted_impurity, feature, threshold)
        for f in features:
            found = _best_split_for_feature(x[idx, f], ys, counts)
            if found is None:
                continue
            weighted, threshold = found
            if best is None or weighted < best[0]:
                best = (weighted, f, threshold)
        if best is None:
            node.value = _leaf_value(ys)
            continue
        _, feature, threshold = best
        mask = x[idx, feature] <= threshold
        node.feature = int(feature)
        node.threshold = float(threshold)
        node.left = _Node()
        node.right = _Node()
        # right pushed first so the left branch is grown first (rng order)
        stack.append((node.right, idx[~mask], depth + 1))
        stack.append((node.left, idx[mask], depth + 1))
    return root


def _predict_tree(root, x, n_labels):
    out = np.zeros((x.shape[0], n_labels), dtype=np.int64)
    stack = [(root, np.arange(x.shape[0]))]
    while stack:
        node, idx = stack.pop()
        if idx.size == 0:
            continue
        if node.is_leaf:
            out[idx] = node.value
            continue
        mask = x[idx, node.feature] <= node.threshold
        stack.append((node.left, idx[mask]))
        stack.append((node.right, idx[~mask]))
    return out


class DecisionTree:
    def __init__(self, spec: ClassifierSpec | None = None):
        self.spec = spec or ClassifierSpec(kind="dt")
        self.root = None
        self.input_dim = 0
        self.n_labels = 0

    def fit(self, x, y, rng=None):
        x, y = validate_training_data(x, y)
        self.input_dim = x.shape[1]
        self.n_labels = y.shape[1]
        hp = self.spec.resolved_hyperparameters()
        if rng is None:
            rng = np.random.default_rng(self.spec.seed)
        self.root = _grow_tree(
            x,
            y,
            min_samples_split=hp["min_samples_split"],
            max_depth=hp["max_depth"],
            max_features=hp["max_features"],
            rng=rng,
        )
        return self

    def predict(self, x) -> np.ndarray:
        x = check_input_dim(self, x)
        return _predict_tree(self.root, x, self.n_labels)

    def depth(self) -> int:
        def walk(node):
            if node.is_leaf:
                return 0
            return 1 + max(walk(node.left), walk(node.right))

        return walk(self.root)


class RandomForest:
    """Bagging of multi-output trees with per-split feature subsampling."""

    def __init__(self, spec: ClassifierSpec | None = None):
        self.spec = spec or ClassifierSpec(kind="rf")
        self.trees: list = []
        self.input_dim = 0
        self.n_labels = 0

    def fit(self, x, y):
        x, y = validate_training_data(x, y)
        self.input_dim = x.shape[1]
        self.n_labels = y.shape[1]
        hp = self.spec.resolved_hyperparameters()
        rng = np.random.default_rng(self.spec.seed)
        tree_spec = ClassifierSpec(
            kind="dt",
            hyperparameters={
                "max_depth": hp["max_depth"],
                "min_samples_split": hp["min_samples_split"],
                "max_features": hp["max_features"],
            },
            seed=self.spec.seed,
        )
        n = x.shape[0]
        self.trees = []
        for _ in range(int(hp["n_estimators"])):
            idx = rng.integers(0, n, size=n) if hp["bootstrap"] else np.arange(n)
            tree = DecisionTree(tree_spec)
            tree.fit(x[idx], y[idx], rng=rng)
            self.trees.append(tree)
        return self

    def predict(self, x) -> np.ndarray:
        x = check_input_dim(self, x)
        votes = np.zeros((x.shape[0], self.n_labels), dtype=np.int64)
        for tree in self.trees:
            votes += _predict_tree(tree.root, x, self.n_labels)
        return (2 * votes > len(self.trees)).astype(np.int64)
