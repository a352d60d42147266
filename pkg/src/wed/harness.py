"""Dev-tuned accuracy evaluation, WED grid search and significance tests.

Every method yields one similarity score per pair (higher means more
similar; distances go through :func:`wed.core.normalized_score`). A pair is
predicted to be a paraphrase iff its score is >= the threshold tuned on the
development split.
"""

from __future__ import annotations

import csv
import itertools
import math
from collections.abc import Sequence
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np
from scipy import stats

from wed.baselines import IdfTable, embedding_cosine, jaccard, tfidf_cosine
from wed.core import (
    WedParams,
    edit_distance,
    normalized_score,
    pair_features,
    similarity_from_features,
    wed_distance,
    wed_from_similarity,
)
from wed.datasets import DatasetSplit
from wed.embeddings import EmbeddingTable

METHODS = ("ed", "wed", "jaccard", "tfidf", "embcos")
EMBEDDING_METHODS = ("embcos",)
METHOD_LABELS = {
    "ed": "ED",
    "wed": "WED",
    "jaccard": "Jaccard",
    "tfidf": "TF-IDF",
    "embcos": "Embedding",
}
ABLATIONS = ("-Embedding", "-Context")


@dataclass(frozen=True)
class MethodScore:
    method: str
    scores: tuple[float, ...]

    def __post_init__(self):
        if not all(math.isfinite(s) for s in self.scores):
            raise ValueError(f"{self.method}: non-finite score")

    def __len__(self):
        return len(self.scores)


@dataclass(frozen=True)
class EvalReport:
    method: str
    split: str
    threshold: float
    accuracy: float
    correctness: tuple[int, ...]
    params: WedParams | None = None


def _labels(split_or_labels) -> np.ndarray:
    if isinstance(split_or_labels, DatasetSplit):
        return np.array(split_or_labels.labels, dtype=np.int64)
    return np.asarray(split_or_labels, dtype=np.int64)


def _scores(scores) -> np.ndarray:
    if isinstance(scores, MethodScore):
        scores = scores.scores
    return np.asarray(scores, dtype=np.float64)


# --------------------------------------------------------------------------
# Scoring


def score_pair(method: str, a, b, *, table: EmbeddingTable | None = None,
               idf: IdfTable | None = None, params: WedParams = WedParams()) -> float:
    if method == "ed":
        return normalized_score(edit_distance(a, b), len(a), len(b))
    if method == "wed":
        return normalized_score(wed_distance(a, b, table, params), len(a), len(b))
    if method == "jaccard":
        return jaccard(a, b)
    if method == "tfidf":
        return tfidf_cosine(a, b, idf)
    if method == "embcos":
        if table is None:
            raise ValueError("embcos needs an embedding table")
        return embedding_cosine(a, b, table)
    raise ValueError(f"unknown method {method!r}; expected one of {', '.join(METHODS)}")


def score_split(method: str, split: DatasetSplit, *, table: EmbeddingTable | None = None,
                idf: IdfTable | None = None, params: WedParams = WedParams()) -> MethodScore:
    return MethodScore(method, tuple(
        score_pair(method, p.a, p.b, table=table, idf=idf, params=params) for p in split))


# --------------------------------------------------------------------------
# Thresholds and accuracy


def tune_threshold(scores, labels) -> tuple[float, float]:
    """Pick the accuracy-maximizing threshold.

    Candidates are the midpoints between consecutive distinct scores plus
    one sentinel below the minimum and one above the maximum. Ties go to the
    smallest threshold.

    Returns
    -------
    (threshold, accuracy)
    """
    s = _scores(scores)
    y = _labels(labels)
    n = len(s)
    if n == 0:
        raise ValueError("cannot tune a threshold on an empty split")
    if len(y) != n:
        raise ValueError(f"{n} scores for {len(y)} labels")
    order = np.argsort(s, kind="stable")
    s, y = s[order], y[order]
    # threshold k predicts 1 for sorted positions >= k
    zeros_below = np.concatenate(([0], np.cumsum(1 - y)))
    ones_at_or_above = y.sum() - np.concatenate(([0], np.cumsum(y)))
    correct = zeros_below + ones_at_or_above
    valid = np.ones(n + 1, dtype=bool)
    valid[1:n] = s[:-1] < s[1:]
    k = int(np.flatnonzero(valid)[np.argmax(correct[valid])])
    if k == 0:
        threshold = float(s[0]) - 1.0
    elif k == n:
        threshold = float(s[-1]) + 1.0
    else:
        threshold = (float(s[k - 1]) + float(s[k])) / 2.0
        if threshold <= s[k - 1]:
            threshold = float(s[k])
    return threshold, float(correct[k]) / n


def evaluate(scores: MethodScore, split: DatasetSplit, threshold: float,
             params: WedParams | None = None, method: str | None = None) -> EvalReport:
    s = _scores(scores)
    y = _labels(split)
    if len(s) != len(y):
        raise ValueError(f"{len(s)} scores for {len(y)} pairs")
    predicted = (s >= threshold).astype(np.int64)
    correctness = tuple(int(v) for v in (predicted == y))
    accuracy = sum(correctness) / len(correctness) if correctness else 0.0
    name = method or (scores.method if isinstance(scores, MethodScore) else "?")
    return EvalReport(name, split.name, threshold, accuracy, correctness, params)


def run_method(method: str, dev: DatasetSplit, test: DatasetSplit, *,
               table: EmbeddingTable | None = None, idf: IdfTable | None = None,
               params: WedParams = WedParams(), threshold: float | None = None,
               label: str | None = None) -> tuple[EvalReport, EvalReport]:
    """Tune the threshold on ``dev`` (unless one is given), then score ``test``.

    Returns the dev and test reports; the dev report is None when the
    threshold was fixed by the caller.
    """
    label = label or METHOD_LABELS.get(method, method)
    p = params if method == "wed" else None
    dev_report = None
    if threshold is None:
        dev_scores = score_split(method, dev, table=table, idf=idf, params=params)
        threshold, _ = tune_threshold(dev_scores, dev)
        dev_report = evaluate(dev_scores, dev, threshold, p, label)
    test_scores = score_split(method, test, table=table, idf=idf, params=params)
    return dev_report, evaluate(test_scores, test, threshold, p, label)


# --------------------------------------------------------------------------
# Grid search


def _steps(lo, hi, step):
    n = int(round((hi - lo) / step))
    return tuple(round(lo + k * step, 10) for k in range(n + 1))


@dataclass(frozen=True)
class GridSpec:
    """Candidate WED hyperparameters; ``lam`` is filtered to ``lam <= 1 - mu``.

    ``use_embedding``/``use_context`` are fixed for the whole grid (they are
    the ablation switches, not searched).
    """

    w_values: tuple[float, ...] = (0.5, 1.0, 2.0, 4.0, 8.0, 16.0, 20.0)
    b_values: tuple[float, ...] = (-1.0, -0.5, 0.0, 0.5, 1.0)
    lambda_values: tuple[float, ...] = field(default_factory=lambda: _steps(0.0, 1.0, 0.1))
    mu_values: tuple[float, ...] = field(default_factory=lambda: _steps(-2.0, 1.0, 0.5))
    use_embedding: bool = True
    use_context: bool = True

    def __post_init__(self):
        for name in ("w_values", "b_values", "lambda_values", "mu_values"):
            values = tuple(sorted(float(v) for v in getattr(self, name)))
            if not all(math.isfinite(v) for v in values):
                raise ValueError(f"{name} must be finite")
            object.__setattr__(self, name, values)

    def lam_mu(self) -> list[tuple[float, float]]:
        lams = self.lambda_values if self.use_context else self.lambda_values[:1]
        return [(lam, mu) for lam in lams for mu in self.mu_values if lam <= 1.0 - mu + 1e-9]

    def w_b(self) -> list[tuple[float, float]]:
        if not self.use_embedding:
            # w and b only act through the embedding branch
            return [(self.w_values[0], self.b_values[0])] if self.w_values and self.b_values else []
        return list(itertools.product(self.w_values, self.b_values))

    def points(self) -> list[WedParams]:
        """Distinct parameter settings in lexicographic ``(w, b, lam, mu)`` order."""
        return sorted(
            (WedParams(w, b, lam, mu, self.use_embedding, self.use_context)
             for w, b in self.w_b() for lam, mu in self.lam_mu()),
            key=_param_key,
        )


def _param_key(p: WedParams):
    return (p.w, p.b, p.lam, p.mu)


@dataclass(frozen=True)
class GridResult:
    params: WedParams
    threshold: float
    accuracy: float


class _PairBank:
    """Precomputed similarity features of a split, reused across grid points."""

    def __init__(self, features, lengths, labels):
        self.features = features
        self.lengths = lengths
        self.labels = labels

    @classmethod
    def build(cls, split: DatasetSplit, table: EmbeddingTable | None):
        return cls([pair_features(p.a, p.b, table) for p in split],
                   [(len(p.a), len(p.b)) for p in split],
                   np.array(split.labels, dtype=np.int64))

    def scores(self, sims, params: WedParams) -> np.ndarray:
        return np.array([normalized_score(wed_from_similarity(s, params), la, lb)
                         for s, (la, lb) in zip(sims, self.lengths)])

    def evaluate_wb(self, w, b, lam_mu, use_embedding, use_context):
        base = WedParams(w, b, 1.0, 1.0, use_embedding, use_context)
        sims = [np.ascontiguousarray(similarity_from_features(f, base)) for f in self.features]
        out = []
        for lam, mu in lam_mu:
            params = base.with_(lam=lam, mu=mu)
            threshold, acc = tune_threshold(self.scores(sims, params), self.labels)
            out.append((params, threshold, acc))
        return out


_WORKER_BANK: _PairBank | None = None


def _init_worker(bank):
    global _WORKER_BANK
    _WORKER_BANK = bank


def _worker_task(args):
    return _WORKER_BANK.evaluate_wb(*args)


def grid_search(grid: GridSpec, dev: DatasetSplit, table: EmbeddingTable | None,
                workers: int = 1) -> GridResult:
    """Exhaustively search ``grid`` for the best dev accuracy.

    Each point gets its own tuned threshold. Equal accuracies resolve to the
    lexicographically smallest ``(w, b, lam, mu)``, so the outcome does not
    depend on grid ordering or on the number of workers.
    """
    if len(dev) == 0:
        raise ValueError("grid search needs a non-empty dev split")
    lam_mu = grid.lam_mu()
    tasks = [(w, b, lam_mu, grid.use_embedding, grid.use_context) for w, b in grid.w_b()]
    if not lam_mu or not tasks:
        raise ValueError("empty hyperparameter grid")
    bank = _PairBank.build(dev, table)
    if workers > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=workers, initializer=_init_worker,
                                 initargs=(bank,)) as pool:
            chunks = list(pool.map(_worker_task, tasks))
    else:
        chunks = [bank.evaluate_wb(*t) for t in tasks]
    results = [r for chunk in chunks for r in chunk]
    best = min(results, key=lambda r: (-r[2], _param_key(r[0])))
    return GridResult(*best)


def tune_and_evaluate(grid: GridSpec, dev: DatasetSplit, test: DatasetSplit,
                      table: EmbeddingTable | None, workers: int = 1,
                      label: str = "WED") -> tuple[EvalReport, EvalReport]:
    """Grid-search WED on ``dev`` and report it on ``dev`` and ``test``."""
    best = grid_search(grid, dev, table, workers)
    reports = tuple(
        evaluate(score_split("wed", split, table=table, params=best.params), split,
                 best.threshold, best.params, label)
        for split in (dev, test)
    )
    return reports


def ablation_grid(variant: str, grid: GridSpec) -> GridSpec:
    if variant == "-Embedding":
        return GridSpec(grid.w_values, grid.b_values, grid.lambda_values, grid.mu_values,
                        use_embedding=False, use_context=grid.use_context)
    if variant == "-Context":
        return GridSpec(grid.w_values, grid.b_values, (0.0,), grid.mu_values,
                        use_embedding=grid.use_embedding, use_context=False)
    raise ValueError(f"unknown ablation {variant!r}; expected one of {', '.join(ABLATIONS)}")


def run_ablation(variant: str, dev: DatasetSplit, test: DatasetSplit, grid: GridSpec,
                 table: EmbeddingTable | None, workers: int = 1) -> EvalReport:
    """Re-tune WED with one technique disabled and report test accuracy."""
    _, test_report = tune_and_evaluate(ablation_grid(variant, grid), dev, test, table,
                                       workers, label=variant)
    return test_report


# --------------------------------------------------------------------------
# Significance


def paired_t_test(correct_x: Sequence[int], correct_y: Sequence[int]) -> tuple[float, float]:
    """Paired t-test on per-example correctness.

    Returns the t statistic of ``x - y`` and the one-sided confidence that
    ``x`` outperforms ``y`` (Student t CDF with ``n - 1`` degrees of
    freedom). Zero-variance differences give ``(0, 0.5)`` when the mean is
    zero and ``(+-inf, 1 or 0)`` otherwise.
    """
    x = np.asarray(correct_x, dtype=np.float64)
    y = np.asarray(correct_y, dtype=np.float64)
    if x.shape != y.shape:
        raise ValueError("correctness sequences must have equal length")
    n = len(x)
    if n < 2:
        raise ValueError("a paired t-test needs at least two examples")
    d = x - y
    mean = d.mean()
    sd = d.std(ddof=1)
    if sd == 0.0:
        if mean == 0.0:
            return 0.0, 0.5
        return (math.inf, 1.0) if mean > 0 else (-math.inf, 0.0)
    t = mean / (sd / math.sqrt(n))
    return float(t), float(stats.t.cdf(t, df=n - 1))


# --------------------------------------------------------------------------
# Results files

RESULT_COLUMNS = ("method", "dataset", "split", "threshold", "hyperparameters", "accuracy")


def _fmt(x: float) -> str:
    return repr(float(x))


def write_results(path, dataset: str, reports: Sequence[EvalReport]) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        out = csv.writer(fh, delimiter="\t", lineterminator="\n")
        out.writerow(RESULT_COLUMNS)
        for r in reports:
            out.writerow([r.method, dataset, r.split, _fmt(r.threshold),
                          r.params.describe() if r.params else "-", _fmt(r.accuracy)])


def write_correctness(path, split: DatasetSplit, reports: Sequence[EvalReport]) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        out = csv.writer(fh, delimiter="\t", lineterminator="\n")
        out.writerow(["id"] + [r.method for r in reports])
        for k, pair in enumerate(split):
            out.writerow([pair.id] + [r.correctness[k] for r in reports])


def read_correctness(path) -> dict[str, list[int]]:
    """Load a per-pair correctness file into ``{method: [0/1, ...]}``."""
    with open(path, encoding="utf-8", newline="") as fh:
        rows = list(csv.reader(fh, delimiter="\t"))
    header, body = rows[0], rows[1:]
    return {m: [int(r[k]) for r in body] for k, m in enumerate(header) if k > 0}
