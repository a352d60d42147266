"""Word-embedding-based edit distance and unsupervised paraphrase baselines."""

from wed.baselines import IdfTable, build_idf, embedding_cosine, jaccard, tfidf_cosine
from wed.core import (
    Alignment,
    EditOp,
    WedParams,
    edit_distance,
    normalized_score,
    wed_align,
    wed_costs,
    wed_distance,
    word_sim,
)
from wed.datasets import DatasetSplit, LabeledPair, load_split, vocabulary
from wed.embeddings import EmbeddingLoadError, EmbeddingTable, cosine, load_embeddings
from wed.text import Sentence, tokenize

__version__ = "0.1.0"

__all__ = [
    "Alignment",
    "DatasetSplit",
    "EditOp",
    "EmbeddingLoadError",
    "EmbeddingTable",
    "IdfTable",
    "LabeledPair",
    "Sentence",
    "WedParams",
    "build_idf",
    "cosine",
    "edit_distance",
    "embedding_cosine",
    "jaccard",
    "load_embeddings",
    "load_split",
    "normalized_score",
    "tfidf_cosine",
    "tokenize",
    "vocabulary",
    "wed_align",
    "wed_costs",
    "wed_distance",
    "word_sim",
]
