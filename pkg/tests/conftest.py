import random

import numpy as np
import pytest

from wed.core import WedParams
from wed.embeddings import EmbeddingTable
from wed.text import Sentence

ALPHABET = ["a", "b", "c", "d", "e", "f", "g", "h"]
EMBEDDED = ["a", "b", "c", "d", "e", "f"]  # "g" and "h" stay out of vocabulary

_ACCEPTANCE = []


def random_sentence(rng: random.Random, max_len: int, alphabet=ALPHABET) -> Sentence:
    return Sentence.from_tokens(rng.choice(alphabet) for _ in range(rng.randint(0, max_len)))


def random_vectors(rng: random.Random, dim: int = 4, tokens=EMBEDDED) -> dict:
    vectors = {t: [rng.gauss(0, 1) for _ in range(dim)] for t in tokens}
    if rng.random() < 0.2:
        vectors[rng.choice(list(tokens))] = [0.0] * dim
    return vectors


def random_params(rng: random.Random, *, floor: bool = False) -> WedParams:
    """Parameters from the tuned ranges; ``floor`` enforces lam + mu <= 1, mu >= 0."""
    if floor:
        mu = rng.uniform(0.0, 1.0)
        lam = rng.uniform(0.0, 1.0 - mu)
    else:
        mu = rng.uniform(-2.0, 1.0)
        lam = rng.uniform(0.0, min(1.0, 1.0 - mu))
    return WedParams(
        w=rng.uniform(0.01, 20.0),
        b=rng.uniform(-1.0, 1.0),
        lam=lam,
        mu=mu,
        use_embedding=rng.random() < 0.8,
        use_context=rng.random() < 0.8,
    )


def table_of(vectors: dict) -> EmbeddingTable:
    return EmbeddingTable({k: np.asarray(v, dtype=float) for k, v in vectors.items()})


@pytest.fixture
def acceptance():
    """Record a named acceptance criterion outcome for the end-of-run summary."""

    def record(name: str, ok: bool, detail: str = ""):
        _ACCEPTANCE.append((name, "PASS" if ok else "FAIL", detail))
        assert ok, f"{name}: {detail}"

    def skip(name: str, reason: str):
        _ACCEPTANCE.append((name, "SKIP", reason))
        pytest.skip(reason)

    record.skip = skip
    return record


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for name, status, detail in _ACCEPTANCE:
        terminalreporter.write_line(f"{status}  {name}  {detail}")
