"""Shared fixtures for the polyemo test suite."""

import numpy as np
import pytest
from hypothesis import HealthCheck, settings

from polyemo.corpus import EMOTIONS, DatasetSplit, LabeledDocument
from polyemo.synthetic import write_corpus, write_word_vectors

settings.register_profile(
    "polyemo",
    deadline=None,
    derandomize=True,
    max_examples=50,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("polyemo")

# one line per acceptance check, echoed after the test summary
ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance checks")
        for line in ACCEPTANCE_LINES:
            terminalreporter.line(line)


def make_split(texts, labels=None, language="xx", role="train", ids=None):
    """Build an in-memory DatasetSplit from parallel lists."""
    docs = []
    for i, text in enumerate(texts):
        doc_id = ids[i] if ids is not None else f"d{i}"
        row = None if labels is None else tuple(int(v) for v in labels[i])
        docs.append(LabeledDocument(id=doc_id, text=text, labels=row))
    return DatasetSplit(language=language, role=role, documents=tuple(docs))


def random_label_matrix(rng, n_samples, n_labels=len(EMOTIONS)):
    return rng.integers(0, 2, size=(n_samples, n_labels)).astype(np.int64)


@pytest.fixture
def rng():
    return np.random.default_rng(0)


@pytest.fixture(scope="session")
def synthetic_dir(tmp_path_factory):
    """Small synthetic corpus on disk: data/<lang>/{train,dev,test}.csv plus vectors."""
    root = tmp_path_factory.mktemp("synthetic")
    data_dir = root / "data"
    write_corpus(data_dir, seed=0, n_documents=120, language="syn")
    write_word_vectors(root / "syn.vec", seed=0, dimension=12)
    return root
