"""Edit distance and its word-embedding-weighted generalization (WED).

Classical edit distance uses unit insertion/deletion costs and a 0/2
substitution cost. WED replaces these with costs derived from a word
similarity in [0, 1]::

    sim(x, y) = 1                          if x == y
              = sigmoid(w * cos(e_x, e_y) + b)  if both have embeddings
              = 0                          otherwise

    insert(b_j @ row i) = 1 - (lam * max_{k != i} sim(a_k, b_j) + mu)
    delete(a_i @ col j) = 1 - (lam * max_{k != j} sim(a_i, b_k) + mu)
    substitute(a_i, b_j) = 2 - 2 * sim(a_i, b_j)

The exclusion in the insertion/deletion maxima is positional and refers to
the word on the other axis of the current DP cell, so those costs depend on
the cell, not just on the word being inserted or deleted. On the boundary
row/column there is no word to exclude and the maximum runs over the whole
other sentence. The maximum over an empty set is 0. Costs are never clamped:
with ``mu > 1 - lam * sim`` they go negative and so can the distance.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import NamedTuple

import numpy as np
from numba import njit

from wed.embeddings import EmbeddingTable
from wed.text import Sentence

MATCH = "match"
SUBSTITUTE = "substitute"
INSERT = "insert"
DELETE = "delete"


@dataclass(frozen=True)
class WedParams:
    """Hyperparameters of WED.

    ``w`` and ``b`` scale and shift the cosine inside the sigmoid; ``lam``
    weights the context discount on insertions/deletions and ``mu`` offsets
    it. ``use_embedding=False`` removes the embedding branch of the word
    similarity (exact match only); ``use_context=False`` forces ``lam`` to 0.
    """

    w: float = 1.0
    b: float = 0.0
    lam: float = 1.0
    mu: float = 1.0
    use_embedding: bool = True
    use_context: bool = True

    def __post_init__(self):
        for name in ("w", "b", "lam", "mu"):
            value = getattr(self, name)
            if not math.isfinite(value):
                raise ValueError(f"{name} must be finite, got {value!r}")

    @property
    def effective_lam(self) -> float:
        return self.lam if self.use_context else 0.0

    def with_(self, **changes) -> WedParams:
        return replace(self, **changes)

    def describe(self) -> str:
        return (f"w={self.w:g};b={self.b:g};lambda={self.lam:g};mu={self.mu:g};"
                f"embedding={int(self.use_embedding)};context={int(self.use_context)}")


#: WED settings under which it reduces exactly to classical edit distance.
ED_PARAMS = WedParams(lam=0.0, mu=0.0, use_embedding=False)


def sigmoid(x):
    """Logistic function, evaluated without overflow for large negative x."""
    x = np.asarray(x, dtype=np.float64)
    out = np.empty_like(x)
    pos = x >= 0
    out[pos] = 1.0 / (1.0 + np.exp(-x[pos]))
    ex = np.exp(x[~pos])
    out[~pos] = ex / (1.0 + ex)
    return out if out.ndim else float(out)


# --------------------------------------------------------------------------
# Classical edit distance


def edit_distance(a, b) -> float:
    """Edit distance with unit insert/delete and 0/2 substitution costs."""
    a = list(a)
    b = list(b)
    prev = list(range(len(b) + 1))
    for i in range(1, len(a) + 1):
        cur = [i] + [0] * len(b)
        ai = a[i - 1]
        for j in range(1, len(b) + 1):
            sub = prev[j - 1] + (0 if ai == b[j - 1] else 2)
            cur[j] = min(cur[j - 1] + 1, prev[j] + 1, sub)
        prev = cur
    return float(prev[-1])


def normalized_score(distance: float, l_a: int, l_b: int) -> float:
    """Map a distance to a similarity score, ``1 - d / max(l_a + l_b, 1)``."""
    return 1.0 - distance / max(l_a + l_b, 1)


# --------------------------------------------------------------------------
# Word similarity


def word_sim(wa: str, wb: str, table: EmbeddingTable | None, params: WedParams = WedParams()) -> float:
    if wa == wb:
        return 1.0
    if not params.use_embedding or table is None:
        return 0.0
    c = table.similarity(wa, wb)
    if c is None:
        return 0.0
    return sigmoid(params.w * c + params.b)


class PairFeatures(NamedTuple):
    """Parameter-independent pieces of the similarity matrix of a pair.

    ``cos`` holds token cosines, ``embedded`` marks cells where both tokens
    have vectors, and ``equal`` marks identical tokens.
    """

    cos: np.ndarray
    embedded: np.ndarray
    equal: np.ndarray

    @property
    def shape(self):
        return self.equal.shape


def pair_features(a: Sentence, b: Sentence, table: EmbeddingTable | None) -> PairFeatures:
    la, lb = len(a), len(b)
    equal = np.array([x == y for x in a for y in b], dtype=bool).reshape(la, lb)
    if table is None:
        return PairFeatures(np.zeros((la, lb)), np.zeros((la, lb), dtype=bool), equal)
    ua, fa = table.unit_rows(a)
    ub, fb = table.unit_rows(b)
    cos = np.clip(ua @ ub.T, -1.0, 1.0)
    embedded = fa[:, None] & fb[None, :]
    return PairFeatures(cos, embedded, equal)


def similarity_from_features(features: PairFeatures, params: WedParams) -> np.ndarray:
    sim = np.zeros(features.shape, dtype=np.float64)
    if params.use_embedding:
        mask = features.embedded
        sim[mask] = sigmoid(params.w * features.cos[mask] + params.b)
    sim[features.equal] = 1.0
    return sim


def similarity_matrix(a: Sentence, b: Sentence, table: EmbeddingTable | None,
                      params: WedParams = WedParams()) -> np.ndarray:
    """``sim(a_i, b_j)`` for every token pair, shape ``(len(a), len(b))``."""
    return similarity_from_features(pair_features(a, b, table), params)


# --------------------------------------------------------------------------
# WED costs and dynamic program


class CellCosts(NamedTuple):
    """Edit costs available at one DP cell; None where an operation cannot apply."""

    insert: float | None
    delete: float | None
    substitute: float | None


def _max_excluding(values, skip: int | None) -> float:
    rest = [v for k, v in enumerate(values) if k != skip]
    return max(rest) if rest else 0.0


def wed_costs(a: Sentence, b: Sentence, i: int, j: int, table: EmbeddingTable | None,
              params: WedParams = WedParams()) -> CellCosts:
    """Insertion, deletion and substitution costs entering DP cell ``(i, j)``.

    Indices are 1-based positions in ``a`` and ``b``; 0 denotes the boundary
    row or column. This evaluates the maxima directly and is meant for
    inspection and testing; :func:`wed_distance` uses a cached equivalent.
    """
    if not (0 <= i <= len(a) and 0 <= j <= len(b)):
        raise IndexError(f"cell ({i}, {j}) outside {len(a)}x{len(b)} table")
    lam = params.effective_lam
    insert = delete = substitute = None
    if j >= 1:
        sims = [word_sim(x, b[j - 1], table, params) for x in a]
        m = _max_excluding(sims, i - 1 if i >= 1 else None)
        insert = 1.0 - (lam * m + params.mu)
    if i >= 1:
        sims = [word_sim(a[i - 1], y, table, params) for y in b]
        m = _max_excluding(sims, j - 1 if j >= 1 else None)
        delete = 1.0 - (lam * m + params.mu)
    if i >= 1 and j >= 1:
        substitute = 2.0 - 2.0 * word_sim(a[i - 1], b[j - 1], table, params)
    return CellCosts(insert, delete, substitute)


@njit(cache=True)
def _top_two(sim, axis):
    # best value, its first index, and the best value at any other index
    n = sim.shape[1 - axis]
    m = sim.shape[axis]
    best = np.zeros(n)
    second = np.zeros(n)
    arg = np.full(n, -1, dtype=np.int64)
    for t in range(n):
        for k in range(m):
            v = sim[k, t] if axis == 0 else sim[t, k]
            if v > best[t]:
                second[t] = best[t]
                best[t] = v
                arg[t] = k
            elif v > second[t]:
                second[t] = v
    return best, arg, second


@njit(cache=True)
def _wed_dp(sim, lam, mu):
    """Fill the WED cost table.

    Returns ``(c, ins, dele)`` where ``c`` is the ``(la+1, lb+1)`` DP table,
    ``ins[i, j]`` the cost of inserting ``b_{j+1}`` in row ``i`` and
    ``dele[i, j]`` the cost of deleting ``a_{i+1}`` in column ``j``.
    Relies on all similarities being >= 0 so that 0 stands in for the
    maximum of an empty set.
    """
    la, lb = sim.shape
    col_best, col_arg, col_second = _top_two(sim, 0)
    row_best, row_arg, row_second = _top_two(sim, 1)

    ins = np.empty((la + 1, lb))
    for j in range(lb):
        for i in range(la + 1):
            m = col_second[j] if (i >= 1 and col_arg[j] == i - 1) else col_best[j]
            ins[i, j] = 1.0 - (lam * m + mu)
    dele = np.empty((la, lb + 1))
    for i in range(la):
        for j in range(lb + 1):
            m = row_second[i] if (j >= 1 and row_arg[i] == j - 1) else row_best[i]
            dele[i, j] = 1.0 - (lam * m + mu)

    c = np.empty((la + 1, lb + 1))
    c[0, 0] = 0.0
    for j in range(1, lb + 1):
        c[0, j] = c[0, j - 1] + ins[0, j - 1]
    for i in range(1, la + 1):
        c[i, 0] = c[i - 1, 0] + dele[i - 1, 0]
        for j in range(1, lb + 1):
            best = c[i - 1, j - 1] + (2.0 - 2.0 * sim[i - 1, j - 1])
            v = c[i - 1, j] + dele[i - 1, j]
            if v < best:
                best = v
            v = c[i, j - 1] + ins[i, j - 1]
            if v < best:
                best = v
            c[i, j] = best
    return c, ins, dele


def wed_from_similarity(sim: np.ndarray, params: WedParams) -> float:
    """WED given a precomputed similarity matrix (the grid-search fast path)."""
    c, _, _ = _wed_dp(np.ascontiguousarray(sim, dtype=np.float64),
                      float(params.effective_lam), float(params.mu))
    return float(c[-1, -1])


def wed_distance(a: Sentence, b: Sentence, table: EmbeddingTable | None = None,
                 params: WedParams = WedParams()) -> float:
    """Word-embedding-based edit distance between two token sequences.

    Runs in O(len(a) * len(b)): the context maxima come from per-row and
    per-column best/second-best similarities computed once.
    """
    return wed_from_similarity(similarity_matrix(a, b, table, params), params)


# --------------------------------------------------------------------------
# Alignment


@dataclass(frozen=True)
class EditOp:
    kind: str
    i: int | None  # 1-based position in a, None for insertions
    j: int | None  # 1-based position in b, None for deletions
    cost: float


@dataclass(frozen=True)
class Alignment:
    ops: tuple[EditOp, ...]
    total: float

    def pairs(self):
        """``(i, j)`` per column with None marking a gap."""
        return [(op.i, op.j) for op in self.ops]


def _close(x: float, y: float) -> bool:
    return abs(x - y) <= 1e-12 * max(1.0, abs(x), abs(y))


def wed_align(a: Sentence, b: Sentence, table: EmbeddingTable | None = None,
              params: WedParams = WedParams()) -> Alignment:
    """Recover one minimum-cost edit script by backtracing the DP table.

    When several predecessors reach a cell at equal cost the walk prefers,
    in order: an exact match, a substitution of words with nonzero
    similarity, an insertion, a deletion, and last a substitution of
    unrelated words. Gaps therefore read deletions-then-insertions from left
    to right, and unrelated words share a column only when that is strictly
    cheaper than gapping both.
    """
    sim = np.ascontiguousarray(similarity_matrix(a, b, table, params))
    c, ins, dele = _wed_dp(sim, float(params.effective_lam), float(params.mu))
    ops = []
    i, j = len(a), len(b)
    while i > 0 or j > 0:
        here = c[i, j]
        diag = related = unrelated = None
        if i > 0 and j > 0:
            sub = 2.0 - 2.0 * float(sim[i - 1, j - 1])
            if _close(c[i - 1, j - 1] + sub, here):
                if a[i - 1] == b[j - 1]:
                    diag = EditOp(MATCH, i, j, sub)
                elif sim[i - 1, j - 1] > 0.0:
                    related = EditOp(SUBSTITUTE, i, j, sub)
                else:
                    unrelated = EditOp(SUBSTITUTE, i, j, sub)
        insert = delete = None
        if j > 0 and _close(c[i, j - 1] + ins[i, j - 1], here):
            insert = EditOp(INSERT, None, j, float(ins[i, j - 1]))
        if i > 0 and _close(c[i - 1, j] + dele[i - 1, j], here):
            delete = EditOp(DELETE, i, None, float(dele[i - 1, j]))
        chosen = diag or related or insert or delete or unrelated
        if chosen is None:
            raise RuntimeError(f"backtrace lost the optimal path at cell ({i}, {j})")
        ops.append(chosen)
        if chosen.i is not None:
            i -= 1
        if chosen.j is not None:
            j -= 1
    ops.reverse()
    return Alignment(ops=tuple(ops), total=float(c[-1, -1]))


def ed_align(a: Sentence, b: Sentence) -> Alignment:
    """Classical edit-distance alignment (WED restricted to exact matching)."""
    return wed_align(a, b, None, ED_PARAMS)


def render_alignment(alignment: Alignment, a_words, b_words, *, gap: str = "*",
                     color: bool = False) -> tuple[str, str]:
    """Two aligned text rows, ``*`` marking gaps.

    ``a_words``/``b_words`` are the display forms of the tokens, usually
    their original casing. With ``color`` set, matched and substituted
    pairs are highlighted with ANSI escapes.
    """
    top, bottom = [], []
    palette = ["\x1b[41m", "\x1b[42m", "\x1b[43m", "\x1b[44m", "\x1b[45m", "\x1b[46m"]
    k = 0
    for op in alignment.ops:
        x = a_words[op.i - 1] if op.i is not None else gap
        y = b_words[op.j - 1] if op.j is not None else gap
        width = max(len(x), len(y))
        x, y = x.ljust(width), y.ljust(width)
        if color and op.kind in (MATCH, SUBSTITUTE):
            code = palette[k % len(palette)]
            k += 1
            x, y = f"{code}{x}\x1b[0m", f"{code}{y}\x1b[0m"
        top.append(x)
        bottom.append(y)
    return " ".join(top).rstrip(), " ".join(bottom).rstrip()


__all__ = [
    "Alignment",
    "CellCosts",
    "ED_PARAMS",
    "EditOp",
    "PairFeatures",
    "WedParams",
    "ed_align",
    "edit_distance",
    "normalized_score",
    "pair_features",
    "render_alignment",
    "sigmoid",
    "similarity_from_features",
    "similarity_matrix",
    "wed_align",
    "wed_costs",
    "wed_distance",
    "wed_from_similarity",
    "word_sim",
]
