"""Slow, independent reference implementations used only by the tests.

Nothing here imports the DP code under test: similarities are computed
with the math module and the WED recurrence is evaluated by plain
exponential recursion with maxima taken directly over the exclusion sets.
"""

import math


def ref_cosine(u, v):
    nu = math.sqrt(sum(x * x for x in u))
    nv = math.sqrt(sum(x * x for x in v))
    if nu == 0 or nv == 0:
        return 0.0
    return max(-1.0, min(1.0, sum(x * y for x, y in zip(u, v)) / (nu * nv)))


def ref_sim(x, y, vectors, w, b, use_embedding):
    if x == y:
        return 1.0
    if not use_embedding or x not in vectors or y not in vectors:
        return 0.0
    z = w * ref_cosine(vectors[x], vectors[y]) + b
    return 1.0 / (1.0 + math.exp(-z))


def ref_wed(a, b, vectors, w=1.0, bias=0.0, lam=1.0, mu=1.0, use_embedding=True, use_context=True):
    a, b = list(a), list(b)
    if not use_context:
        lam = 0.0

    def sim(x, y):
        return ref_sim(x, y, vectors, w, bias, use_embedding)

    def insert(i, j):
        others = [sim(a[k], b[j - 1]) for k in range(len(a)) if k != i - 1]
        return 1.0 - (lam * max(others, default=0.0) + mu)

    def delete(i, j):
        others = [sim(a[i - 1], b[k]) for k in range(len(b)) if k != j - 1]
        return 1.0 - (lam * max(others, default=0.0) + mu)

    def cost(i, j):
        if i == 0 and j == 0:
            return 0.0
        options = []
        if j > 0:
            options.append(cost(i, j - 1) + insert(i, j))
        if i > 0:
            options.append(cost(i - 1, j) + delete(i, j))
        if i > 0 and j > 0:
            options.append(cost(i - 1, j - 1) + 2.0 - 2.0 * sim(a[i - 1], b[j - 1]))
        return min(options)

    return cost(len(a), len(b))


def ref_edit_distance(a, b):
    """Classical edit distance by exponential recursion (tiny inputs only)."""
    a, b = list(a), list(b)

    def d(i, j):
        if i == 0:
            return j
        if j == 0:
            return i
        return min(d(i, j - 1) + 1, d(i - 1, j) + 1,
                   d(i - 1, j - 1) + (0 if a[i - 1] == b[j - 1] else 2))

    return d(len(a), len(b))


def threshold_candidates(scores):
    s = sorted(set(scores))
    return [s[0] - 1.0] + [(x + y) / 2 for x, y in zip(s, s[1:])] + [s[-1] + 1.0]


def brute_force_threshold(scores, labels):
    """Best (accuracy, threshold) over every candidate; smallest threshold on ties."""
    best = None
    for t in threshold_candidates(scores):
        acc = sum((s >= t) == bool(y) for s, y in zip(scores, labels)) / len(scores)
        if best is None or acc > best[0]:
            best = (acc, t)
    return best
