"""Deterministic synthetic corpus with one separable word cluster per label.

Each document gets a primary emotion plus occasional secondary ones; every
active emotion contributes several words drawn from that emotion's private
vocabulary, mixed with shared filler words. The clusters make the task
learnable by any reasonable pipeline while staying cheap, which is what the
end-to-end checks need: a corpus where high scores are expected and low
scores indicate a real defect.

A matching word-vector file can be generated where each emotion's words
point along one coordinate axis (plus noise), so mean pooling keeps the
clusters separable in the dense representation too.
"""

from __future__ import annotations

from pathlib import Path

import numpy as np

from .corpus import EMOTIONS, DatasetSplit, LabeledDocument, save_split

WORDS_PER_EMOTION = 15
N_FILLER_WORDS = 30
SECONDARY_RATE = 0.15
SPLIT_FRACTIONS = {"train": 0.7, "dev": 0.1}  # remainder is test


def synthetic_vocabulary() -> dict[str, list[str]]:
    """Emotion name -> private word list, plus the shared "filler" pool."""
    vocab = {
        emo: [f"{emo}w{i:02d}" for i in range(WORDS_PER_EMOTION)] for emo in EMOTIONS
    }
    vocab["filler"] = [f"fillerw{i:02d}" for i in range(N_FILLER_WORDS)]
    return vocab


def _make_document(i: int, rng: np.random.Generator, vocab) -> LabeledDocument:
    primary = i % len(EMOTIONS)
    labels = [0] * len(EMOTIONS)
    labels[primary] = 1
    for j in range(len(EMOTIONS)):
        if j != primary and rng.random() < SECONDARY_RATE:
            labels[j] = 1
    words: list[str] = []
    for j, emo in enumerate(EMOTIONS):
        if labels[j]:
            count = int(rng.integers(6, 11))
            words.extend(rng.choice(vocab[emo], size=count).tolist())
    words.extend(rng.choice(vocab["filler"], size=int(rng.integers(2, 5))).tolist())
    rng.shuffle(words)
    return LabeledDocument(id=f"syn{i:04d}", text=" ".join(words), labels=tuple(labels))


def build_corpus(
    seed: int = 0, n_documents: int = 600, language: str = "syn"
) -> dict[str, DatasetSplit]:
    """Generate train/dev/test splits; equal seed and size reproduce them exactly."""
    rng = np.random.default_rng(seed)
    vocab = synthetic_vocabulary()
    documents = [_make_document(i, rng, vocab) for i in range(n_documents)]
    order = rng.permutation(n_documents)
    n_train = int(SPLIT_FRACTIONS["train"] * n_documents)
    n_dev = int(SPLIT_FRACTIONS["dev"] * n_documents)
    slices = {
        "train": order[:n_train],
        "dev": order[n_train : n_train + n_dev],
        "test": order[n_train + n_dev :],
    }
    return {
        role: DatasetSplit(
            language=language,
            role=role,
            documents=tuple(documents[k] for k in idx),
        )
        for role, idx in slices.items()
    }


def write_corpus(
    data_dir: str | Path, seed: int = 0, n_documents: int = 600, language: str = "syn"
) -> Path:
    """Write the corpus under ``data_dir/<language>/`` and return that directory."""
    splits = build_corpus(seed=seed, n_documents=n_documents, language=language)
    lang_dir = Path(data_dir) / language
    for role, split in splits.items():
        save_split(split, lang_dir / f"{role}.csv")
    return lang_dir


def write_word_vectors(path: str | Path, seed: int = 0, dimension: int = 12) -> Path:
    """Write a text vector file over the synthetic vocabulary.

    Each emotion's words sit near coordinate axis j with small noise; filler
    words are pure low-amplitude noise, so they carry no label signal.
    """
    if dimension < len(EMOTIONS):
        raise ValueError(f"dimension must be >= {len(EMOTIONS)}, got {dimension}")
    rng = np.random.default_rng(seed)
    vocab = synthetic_vocabulary()
    entries: list[tuple[str, np.ndarray]] = []
    for j, emo in enumerate(EMOTIONS):
        for word in vocab[emo]:
            vec = rng.normal(0.0, 0.05, size=dimension)
            vec[j] += 2.0
            entries.append((word, vec))
    for word in vocab["filler"]:
        entries.append((word, rng.normal(0.0, 0.05, size=dimension)))
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(f"{len(entries)} {dimension}\n")
        for word, vec in entries:
            fh.write(word + " " + " ".join(f"{v:.6f}" for v in vec) + "\n")
    return path
