"""Pretrained word vectors read from the common whitespace text format.

A file holds one word per line followed by its vector components. The
word2vec text variant adds a leading ``"<count> <dim>"`` header, which is
detected and skipped. Tables are built once and never mutated, so they can
be shared freely between threads and worker processes.
"""

from __future__ import annotations

import logging
import math
from collections.abc import Iterable

import numpy as np

logger = logging.getLogger(__name__)


class EmbeddingLoadError(OSError):
    """Raised when an embedding file cannot be read at all."""


def cosine(u, v) -> float:
    """Cosine of the angle between ``u`` and ``v``, clamped to [-1, 1].

    A zero vector on either side gives 0.0 instead of an error.
    """
    u = np.asarray(u, dtype=np.float64)
    v = np.asarray(v, dtype=np.float64)
    if u.shape != v.shape:
        raise ValueError(f"dimension mismatch: {u.shape} vs {v.shape}")
    su, sv = np.abs(u).max(initial=0.0), np.abs(v).max(initial=0.0)
    if su == 0.0 or sv == 0.0:
        return 0.0
    u, v = u / su, v / sv
    c = float(np.dot(u, v)) / (math.sqrt(float(np.dot(u, u))) * math.sqrt(float(np.dot(v, v))))
    return min(1.0, max(-1.0, c))


class EmbeddingTable:
    """Immutable token -> vector mapping.

    Vectors live in one ``(n, dim)`` float64 matrix; a unit-normalized copy
    is kept so batches of cosines reduce to a matrix product.

    Attributes
    ----------
    dim : int
        Vector length shared by every entry.
    skipped_lines : int
        Lines dropped during loading because their width did not match ``dim``
        or a component failed to parse.
    duplicates : int
        Repeated tokens ignored during loading (the first occurrence wins).
    """

    def __init__(self, vectors: dict[str, np.ndarray] | None = None, dim: int | None = None,
                 *, skipped_lines: int = 0, duplicates: int = 0):
        vectors = vectors or {}
        if dim is None:
            if not vectors:
                raise ValueError("dim is required for an empty table")
            dim = len(next(iter(vectors.values())))
        if dim <= 0:
            raise ValueError("dim must be positive")
        self.dim = int(dim)
        self._index = {}
        matrix = np.zeros((len(vectors), self.dim), dtype=np.float64)
        for row, (token, vec) in enumerate(vectors.items()):
            vec = np.asarray(vec, dtype=np.float64)
            if vec.shape != (self.dim,):
                raise ValueError(f"vector for {token!r} has shape {vec.shape}, expected ({self.dim},)")
            if not np.all(np.isfinite(vec)):
                raise ValueError(f"vector for {token!r} has non-finite components")
            self._index[token] = row
            matrix[row] = vec
        # rescale before normalizing so huge components cannot overflow the norm
        peak = np.abs(matrix).max(axis=1, keepdims=True) if len(matrix) else np.ones((0, 1))
        scaled = matrix / np.where(peak == 0.0, 1.0, peak)
        norms = np.linalg.norm(scaled, axis=1, keepdims=True)
        self._matrix = matrix
        self._unit = scaled / np.where(norms == 0.0, 1.0, norms)
        self._matrix.flags.writeable = False
        self._unit.flags.writeable = False
        self.skipped_lines = skipped_lines
        self.duplicates = duplicates

    def __len__(self) -> int:
        return len(self._index)

    def __contains__(self, token: str) -> bool:
        return token in self._index

    def __iter__(self):
        return iter(self._index)

    def get(self, token: str) -> np.ndarray | None:
        """Return the vector for ``token`` or None when it is out of vocabulary."""
        row = self._index.get(token)
        if row is None:
            return None
        return self._matrix[row]

    def similarity(self, a: str, b: str) -> float | None:
        """Cosine between two tokens, None if either is missing."""
        ua, ub = self.get(a), self.get(b)
        if ua is None or ub is None:
            return None
        return cosine(ua, ub)

    def unit_rows(self, tokens: Iterable[str]) -> tuple[np.ndarray, np.ndarray]:
        """Unit vectors for ``tokens`` and a mask of which tokens were found.

        Missing tokens get a zero row, so their dot products are 0.
        """
        tokens = list(tokens)
        rows = np.zeros((len(tokens), self.dim), dtype=np.float64)
        found = np.zeros(len(tokens), dtype=bool)
        for k, tok in enumerate(tokens):
            row = self._index.get(tok)
            if row is not None:
                rows[k] = self._unit[row]
                found[k] = True
        return rows, found

    def __repr__(self) -> str:
        return f"EmbeddingTable(n={len(self)}, dim={self.dim})"


def _is_header(parts: list[str]) -> bool:
    if len(parts) != 2:
        return False
    try:
        int(parts[0])
        int(parts[1])
    except ValueError:
        return False
    return True


def load_embeddings(path, vocab_filter: Iterable[str] | None = None) -> EmbeddingTable:
    """Read a text embedding file.

    Parameters
    ----------
    path : str or PathLike
        UTF-8 file with lines of ``<token> <f1> ... <f_dim>``.
    vocab_filter : iterable of str, optional
        When given, only these tokens are kept. The dimension is still taken
        from the first data line of the file.

    Returns
    -------
    EmbeddingTable

    Raises
    ------
    EmbeddingLoadError
        If the file cannot be opened or contains no usable data line.
    """
    keep = set(vocab_filter) if vocab_filter is not None else None
    vectors: dict[str, np.ndarray] = {}
    dim = None
    skipped = 0
    duplicates = 0
    try:
        fh = open(path, encoding="utf-8")
    except OSError as exc:
        raise EmbeddingLoadError(f"cannot read embeddings from {path}: {exc}") from exc
    with fh:
        first = True
        for line in fh:
            line = line.rstrip("\n").rstrip("\r")
            parts = line.split()
            if not parts:
                continue
            if first:
                first = False
                if _is_header(parts):
                    continue
            token, values = parts[0], parts[1:]
            if dim is None:
                if not values:
                    skipped += 1
                    continue
                dim = len(values)
            if len(values) != dim:
                skipped += 1
                continue
            if keep is not None and token not in keep:
                continue
            if token in vectors:
                duplicates += 1
                continue
            try:
                vec = np.array([float(x) for x in values], dtype=np.float64)
            except ValueError:
                skipped += 1
                continue
            if not np.all(np.isfinite(vec)):
                skipped += 1
                continue
            vectors[token] = vec
    if dim is None:
        raise EmbeddingLoadError(f"no embedding vectors found in {path}")
    if skipped:
        logger.warning("%s: skipped %d malformed line(s)", path, skipped)
    if duplicates:
        logger.warning("%s: ignored %d duplicate token(s)", path, duplicates)
    return EmbeddingTable(vectors, dim, skipped_lines=skipped, duplicates=duplicates)
