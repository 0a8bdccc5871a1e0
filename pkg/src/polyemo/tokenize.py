"""Text-to-token segmentation behind a small pluggable contract.

Three tokenizer kinds are provided:

- ``unicode-words`` (default): maximal runs of Unicode letter, mark, number,
  or underscore characters. Pure-punctuation segments are dropped. This is a
  deliberately language-agnostic segmenter that behaves sensibly across
  scripts without shipping a trained tokenizer model.
- ``whitespace``: str.split semantics.
- ``external-vocab``: greedy longest-match segmentation of each whitespace
  chunk against a user-supplied vocabulary file (one token per line).
  Characters not covered by any vocabulary entry come out as single-character
  tokens so no text is silently lost.

Lowercasing, when enabled, is applied to the whole text before segmentation,
which makes tokenization idempotent under case folding.
"""

from __future__ import annotations

import unicodedata
from dataclasses import dataclass, field
from pathlib import Path

from .errors import ConfigError

TOKENIZER_KINDS = ("unicode-words", "whitespace", "external-vocab")


@dataclass(frozen=True)
class TokenizerSpec:
    kind: str = "unicode-words"
    lowercase: bool = True
    vocab_path: str | None = None

    def __post_init__(self):
        if self.kind not in TOKENIZER_KINDS:
            raise ConfigError(f"unknown tokenizer kind {self.kind!r}")
        if self.kind == "external-vocab" and not self.vocab_path:
            raise ConfigError("external-vocab tokenizer requires a vocabulary file")
        if self.kind != "external-vocab" and self.vocab_path:
            raise ConfigError(f"{self.kind} tokenizer does not accept a vocabulary file")


@dataclass(frozen=True)
class TokenSequence:
    """Ordered tokens of one document."""

    tokens: tuple[str, ...]
    source_id: str = ""


def _is_word_char(ch: str) -> bool:
    return unicodedata.category(ch)[0] in ("L", "M", "N") or ch == "_"


def _unicode_word_runs(text: str) -> list[str]:
    out: list[str] = []
    cur: list[str] = []
    for ch in text:
        if _is_word_char(ch):
            cur.append(ch)
        elif cur:
            out.append("".join(cur))
            cur = []
    if cur:
        out.append("".join(cur))
    return out


class Tokenizer:
    """Immutable tokenizer built from a TokenizerSpec; safe for concurrent use."""

    def __init__(self, spec: TokenizerSpec):
        self.spec = spec
        self._vocab: set[str] = set()
        self._max_len = 0
        if spec.kind == "external-vocab":
            path = Path(spec.vocab_path)
            try:
                raw = path.read_text(encoding="utf-8")
            except OSError as exc:
                raise ConfigError(f"cannot read vocabulary file {path}: {exc}") from exc
            for line in raw.splitlines():
                token = line.strip()
                if not token:
                    continue
                if spec.lowercase:
                    token = token.lower()
                self._vocab.add(token)
            if not self._vocab:
                raise ConfigError(f"vocabulary file {path} contains no tokens")
            self._max_len = max(len(t) for t in self._vocab)

    @classmethod
    def from_tokens(cls, spec: TokenizerSpec, tokens) -> "Tokenizer":
        """Build an external-vocab tokenizer from an in-memory token list.

        Lets a persisted model restore its tokenizer without the original
        vocabulary file being present.
        """
        self = cls.__new__(cls)
        self.spec = spec
        self._vocab = set()
        self._max_len = 0
        if spec.kind == "external-vocab":
            for token in tokens:
                token = token.lower() if spec.lowercase else token
                if token:
                    self._vocab.add(token)
            if not self._vocab:
                raise ConfigError("external-vocab tokenizer requires at least one token")
            self._max_len = max(len(t) for t in self._vocab)
        return self

    @property
    def vocab_tokens(self) -> tuple[str, ...]:
        """Sorted vocabulary of an external-vocab tokenizer; empty otherwise."""
        return tuple(sorted(self._vocab))

    def __call__(self, text: str, source_id: str = "") -> TokenSequence:
        if self.spec.lowercase:
            text = text.lower()
        if self.spec.kind == "whitespace":
            tokens = text.split()
        elif self.spec.kind == "unicode-words":
            tokens = _unicode_word_runs(text)
        else:
            tokens = []
            for chunk in text.split():
                tokens.extend(self._greedy_segment(chunk))
        return TokenSequence(tokens=tuple(tokens), source_id=source_id)

    def _greedy_segment(self, chunk: str) -> list[str]:
        out = []
        i = 0
        n = len(chunk)
        while i < n:
            match = None
            for length in range(min(self._max_len, n - i), 0, -1):
                candidate = chunk[i : i + length]
                if candidate in self._vocab:
                    match = candidate
                    break
            if match is None:
                # character fallback keeps unknown material visible downstream
                match = chunk[i]
            out.append(match)
            i += len(match)
        return out


def tokenize(text: str, spec: TokenizerSpec | None = None, source_id: str = "") -> TokenSequence:
    """One-shot tokenization; builds a throwaway Tokenizer from ``spec``."""
    return Tokenizer(spec or TokenizerSpec())(text, source_id)


def tokenize_split(split, tokenizer: Tokenizer) -> list[TokenSequence]:
    """Tokenize every document of a DatasetSplit in order."""
    return [tokenizer(doc.text, source_id=doc.id) for doc in split.documents]
