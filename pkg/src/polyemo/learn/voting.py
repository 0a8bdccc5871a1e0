"""Hard-majority voting over independently trained member classifiers."""

from __future__ import annotations

import numpy as np

from .base import ClassifierSpec, check_input_dim, fit as fit_classifier, validate_training_data


class VotingEnsemble:
    """Per-sample, per-label majority of the members' binary votes.

    An exact tie (possible with an even member count) resolves to 0.
    """

    def __init__(self, spec: ClassifierSpec):
        self.spec = spec
        self.members: list = []
        self.input_dim = 0
        self.n_labels = 0

    def fit(self, x, y):
        x, y = validate_training_data(x, y)
        self.input_dim = x.shape[1]
        self.n_labels = y.shape[1]
        self.members = [fit_classifier(member, x, y) for member in self.spec.members]
        return self

    def predict(self, x) -> np.ndarray:
        x = check_input_dim(self, x)
        votes = np.zeros((x.shape[0], self.n_labels), dtype=np.int64)
        for member in self.members:
            votes += member.predict(x)
        return (2 * votes > len(self.members)).astype(np.int64)
