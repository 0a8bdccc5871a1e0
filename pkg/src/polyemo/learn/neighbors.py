"""k-nearest-neighbors multi-label classifier."""

from __future__ import annotations

import numpy as np

from ..errors import ConfigError
from .base import ClassifierSpec, check_input_dim, validate_training_data


class KNearestNeighbors:
    """Euclidean kNN with per-label majority voting among the k neighbors.

    Distance ties are broken toward the lowest training-row index; a tied
    label vote (possible when k is even) goes to 0.
    """

    def __init__(self, spec: ClassifierSpec | None = None):
        self.spec = spec or ClassifierSpec(kind="knn")
        self.x = None
        self.y = None
        self.input_dim = 0
        self.n_labels = 0

    def fit(self, x, y):
        x, y = validate_training_data(x, y)
        k = int(self.spec.resolved_hyperparameters()["k"])
        if k < 1:
            raise ConfigError(f"k must be >= 1, got {k}")
        self.x = x
        self.y = y
        self.input_dim = x.shape[1]
        self.n_labels = y.shape[1]
        return self

    def predict(self, x) -> np.ndarray:
        x = check_input_dim(self, x)
        k = min(int(self.spec.resolved_hyperparameters()["k"]), self.x.shape[0])
        out = np.zeros((x.shape[0], self.n_labels), dtype=np.int64)
        # blockwise pairwise distances keep memory bounded for large queries
        block = max(1, int(2**22 // max(1, self.x.shape[0])))
        sq_train = (self.x**2).sum(axis=1)
        for start in range(0, x.shape[0], block):
            q = x[start : start + block]
            d2 = (q**2).sum(axis=1)[:, None] - 2.0 * q @ self.x.T + sq_train[None, :]
            neighbors = np.argsort(d2, axis=1, kind="stable")[:, :k]
            votes = self.y[neighbors].sum(axis=1)
            out[start : start + q.shape[0]] = (2 * votes > k).astype(np.int64)
        return out
