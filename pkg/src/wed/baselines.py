"""Order-insensitive unsupervised similarity baselines.

* Jaccard index over the token sets of two sentences.
* Cosine between sparse TF-IDF vectors.
* Cosine between the sums of the sentences' word embeddings.
"""

from __future__ import annotations

import math
from collections import Counter
from collections.abc import Iterable
from dataclasses import dataclass, field

import numpy as np

from wed.embeddings import EmbeddingTable, cosine
from wed.text import Sentence


def jaccard(a, b) -> float:
    """|A & B| / |A | B| over unique tokens; two empty sentences score 1.0."""
    sa, sb = set(a), set(b)
    union = sa | sb
    if not union:
        return 1.0
    return len(sa & sb) / len(union)


@dataclass(frozen=True)
class IdfTable:
    """Smoothed inverse document frequencies, ``ln((N + 1) / (df + 1)) + 1``.

    Tokens never seen get the df=0 weight, so every token has a finite,
    positive idf.
    """

    doc_count: int
    df: dict[str, int] = field(default_factory=dict)

    def __post_init__(self):
        if self.doc_count < 1:
            raise ValueError("an IDF table needs at least one document")

    def idf(self, token: str) -> float:
        return math.log((self.doc_count + 1) / (self.df.get(token, 0) + 1)) + 1.0

    def __getitem__(self, token: str) -> float:
        return self.idf(token)


def build_idf(documents: Iterable[Iterable[str]]) -> IdfTable:
    """Count document frequencies; each sentence is one document."""
    df: Counter[str] = Counter()
    n = 0
    for doc in documents:
        n += 1
        df.update(set(doc))
    return IdfTable(doc_count=n, df=dict(df))


def _tfidf_vector(tokens, idf: IdfTable | None) -> dict[str, float]:
    counts = Counter(tokens)
    if idf is None:
        return {t: float(tf) for t, tf in counts.items()}
    return {t: tf * idf.idf(t) for t, tf in counts.items()}


def tfidf_cosine(a, b, idf: IdfTable | None) -> float:
    """Cosine of sparse tf * idf vectors; ``idf=None`` weights every token 1."""
    va = _tfidf_vector(a, idf)
    vb = _tfidf_vector(b, idf)
    if len(va) > len(vb):
        va, vb = vb, va
    dot = sum(w * vb.get(t, 0.0) for t, w in va.items())
    na = math.sqrt(sum(w * w for w in va.values()))
    nb = math.sqrt(sum(w * w for w in vb.values()))
    if na == 0.0 or nb == 0.0:
        return 0.0
    return min(1.0, max(-1.0, dot / (na * nb)))


def sentence_vector(sentence: Sentence, table: EmbeddingTable) -> np.ndarray | None:
    """Sum of the embeddings of in-vocabulary tokens, None if there are none."""
    vectors = [v for v in (table.get(t) for t in sentence) if v is not None]
    if not vectors:
        return None
    return np.sum(vectors, axis=0)


def embedding_cosine(a: Sentence, b: Sentence, table: EmbeddingTable) -> float:
    va = sentence_vector(a, table)
    vb = sentence_vector(b, table)
    if va is None or vb is None:
        return 0.0
    return cosine(va, vb)
