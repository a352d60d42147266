"""Paraphrase-pair datasets in a canonical TSV layout.

Every split is one UTF-8 file with a pair per line::

    <id>\t<sentence 1>\t<sentence 2>\t<label>

Fields are separated by single tabs with no quoting, labels are 0 (not a
paraphrase) or 1 (paraphrase), and a trailing carriage return is ignored.
See the README for converting the Quora, MSRP and CPC distributions.
"""

from __future__ import annotations

import logging
import os
from collections.abc import Iterable
from dataclasses import dataclass

from wed.text import Sentence, tokenize

logger = logging.getLogger(__name__)

#: Dev/test sizes of the CPC split used for evaluation.
CPC_SIZES = {"dev": 626, "test": 600}


class DatasetError(OSError):
    """Raised when a split file cannot be read."""


@dataclass(frozen=True)
class LabeledPair:
    id: str
    a: Sentence
    b: Sentence
    label: int


@dataclass(frozen=True)
class DatasetSplit:
    name: str
    pairs: tuple[LabeledPair, ...]
    skipped: int = 0

    def __len__(self):
        return len(self.pairs)

    def __iter__(self):
        return iter(self.pairs)

    @property
    def labels(self) -> list[int]:
        return [p.label for p in self.pairs]


def _split_name(path) -> str:
    stem = os.path.splitext(os.path.basename(os.fspath(path)))[0].lower()
    for name in ("train", "dev", "test"):
        if name in stem:
            return name
    return stem


def load_split(path, name: str | None = None) -> DatasetSplit:
    """Parse a TSV split file, skipping (and counting) malformed lines.

    A line is skipped when it does not have exactly four fields, when the
    label is not 0 or 1, or when its id repeats an earlier one.
    """
    try:
        fh = open(path, encoding="utf-8")
    except OSError as exc:
        raise DatasetError(f"cannot read dataset {path}: {exc}") from exc
    pairs = []
    seen = set()
    skipped = 0
    with fh:
        for lineno, line in enumerate(fh, 1):
            line = line.rstrip("\n").rstrip("\r")
            if not line.strip():
                continue
            fields = line.split("\t")
            if len(fields) != 4:
                logger.warning("%s:%d: expected 4 tab-separated fields, got %d", path, lineno, len(fields))
                skipped += 1
                continue
            pid, s1, s2, label = fields
            if label.strip() not in ("0", "1"):
                logger.warning("%s:%d: label %r is not 0 or 1", path, lineno, label)
                skipped += 1
                continue
            if pid in seen:
                logger.warning("%s:%d: duplicate id %r", path, lineno, pid)
                skipped += 1
                continue
            seen.add(pid)
            pairs.append(LabeledPair(pid, tokenize(s1), tokenize(s2), int(label)))
    if skipped:
        logger.warning("%s: skipped %d malformed line(s)", path, skipped)
    return DatasetSplit(name or _split_name(path), tuple(pairs), skipped)


def check_size(split: DatasetSplit, expected: int) -> bool:
    """Warn (without failing) when a split does not have the expected size."""
    if len(split) != expected:
        logger.warning("split %r has %d pairs, expected %d", split.name, len(split), expected)
        return False
    return True


def vocabulary(splits: Iterable[DatasetSplit]) -> set[str]:
    vocab = set()
    for split in splits:
        for pair in split:
            vocab.update(pair.a)
            vocab.update(pair.b)
    return vocab


def sentences(splits: Iterable[DatasetSplit]):
    """Every sentence of every pair, in file order (the IDF document collection)."""
    for split in splits:
        for pair in split:
            yield pair.a
            yield pair.b
