import logging

import pytest

from wed.datasets import CPC_SIZES, DatasetError, check_size, load_split, sentences, vocabulary


def write(tmp_path, text, name="dev.tsv"):
    path = tmp_path / name
    path.write_text(text, encoding="utf-8")
    return path


def test_parse_line(tmp_path):
    split = load_split(write(tmp_path, "7\thow are you\thow do you do\t1\n"))
    assert split.name == "dev"
    (pair,) = split.pairs
    assert pair.id == "7"
    assert (len(pair.a), len(pair.b), pair.label) == (3, 4, 1)


def test_empty_file(tmp_path):
    split = load_split(write(tmp_path, ""))
    assert len(split) == 0


def test_malformed_lines_are_counted(tmp_path, caplog):
    text = ("1\ta b\tc d\t1\r\n"
            "2\ttoo few fields\t0\n"
            "3\tx\ty\t2\n"
            "1\tdup id\tdup\t0\n"
            "\n"
            "4\tA, b.\tc\t0\n")
    with caplog.at_level(logging.WARNING):
        split = load_split(write(tmp_path, text, "test.tsv"), name="test")
    assert [p.id for p in split] == ["1", "4"]
    assert split.skipped == 3
    assert split.labels == [1, 0]
    assert split.pairs[1].a.tokens == ("a", ",", "b", ".")
    assert "skipped 3" in caplog.text


def test_count_matches_lines(tmp_path):
    lines = [f"{k}\ts{k}\tt{k}\t{k % 2}" for k in range(25)]
    split = load_split(write(tmp_path, "\n".join(lines) + "\n"))
    assert len(split) == 25


def test_deterministic(tmp_path):
    path = write(tmp_path, "1\ta b\tb c\t1\n2\tc\td\t0\n")
    assert load_split(path) == load_split(path)


def test_unreadable(tmp_path):
    with pytest.raises(DatasetError):
        load_split(tmp_path / "missing.tsv")


def test_vocabulary(tmp_path):
    split = load_split(write(tmp_path, "1\ta b\tb c\t1\n2\tc\ta\t0\n"))
    assert vocabulary([split]) == {"a", "b", "c"}
    assert vocabulary([]) == set()
    assert len(list(sentences([split]))) == 4


def test_cpc_size_check_warns(tmp_path, caplog):
    split = load_split(write(tmp_path, "1\ta\tb\t1\n"))
    with caplog.at_level(logging.WARNING):
        assert not check_size(split, CPC_SIZES["dev"])
    assert "expected 626" in caplog.text
