"""Tokenization shared by every similarity method.

Text is lowercased, split on whitespace, and every punctuation character
becomes a token of its own, so ``"Alaska?"`` yields ``["alaska", "?"]``.
No stemming or stop-word removal is applied.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

_TOKEN_RE = re.compile(r"[^\W_]+|[^\w\s]|_", re.UNICODE)


def normalize(text: str) -> str:
    return text.lower()


@dataclass(frozen=True)
class Sentence:
    """An ordered token sequence plus the text it came from."""

    tokens: tuple[str, ...]
    raw: str = ""

    def __len__(self) -> int:
        return len(self.tokens)

    def __iter__(self):
        return iter(self.tokens)

    def __getitem__(self, index):
        return self.tokens[index]

    @classmethod
    def from_tokens(cls, tokens) -> Sentence:
        """Build a sentence from already-normalized tokens (mostly for tests)."""
        tokens = tuple(tokens)
        return cls(tokens=tokens, raw=" ".join(tokens))


def tokenize(raw: str) -> Sentence:
    """Split ``raw`` into lowercase word and punctuation tokens.

    >>> tokenize("How large is the largest city in Alaska?").tokens
    ('how', 'large', 'is', 'the', 'largest', 'city', 'in', 'alaska', '?')
    """
    return Sentence(tokens=tuple(_TOKEN_RE.findall(normalize(raw))), raw=raw)


def surfaces(sentence: Sentence) -> tuple[str, ...]:
    """Tokens in their original casing, for display.

    Falls back to the normalized tokens if case folding changed the token
    boundaries (possible for a handful of non-ASCII characters).
    """
    words = tuple(_TOKEN_RE.findall(sentence.raw))
    if len(words) != len(sentence.tokens):
        return sentence.tokens
    return words
