import pytest

from wed.cli import main

ALASKA_A = "How large is the largest city in Alaska?"
ALASKA_B = "The biggest city in Alaska is how big?"

DEV = """\
1\ta b\ta b\t1
2\ta b\tc d\t0
3\ta b c\ta b d\t1
4\tx\ty z\t0
"""
TEST = """\
1\tp q\tp q\t1
2\tp q\tp r\t0
3\tp\tr\t0
4\tp q r\tq r s\t1
"""
EMB = """\
8 3
a 1 0 0
b 0 1 0
c 0.9 0.1 0
d 0 0.8 0.3
p 1 1 0
q -1 0 1
r 0.5 0.5 0.5
x 0 0 1
"""


@pytest.fixture
def data(tmp_path):
    (tmp_path / "toy").mkdir()
    paths = {}
    for name, text in (("dev", DEV), ("test", TEST), ("emb", EMB)):
        path = tmp_path / "toy" / f"{name}.{'txt' if name == 'emb' else 'tsv'}"
        path.write_text(text, encoding="utf-8")
        paths[name] = str(path)
    return paths


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def fields(out):
    return dict(line.split("\t") for line in out.strip().splitlines())


def test_score_ed(capsys):
    code, out, _ = run(capsys, "score", "--method", "ed", "--a", "x y", "--b", "x y")
    assert code == 0
    assert fields(out) == {"method": "ed", "distance": "0.0000", "score": "1.0000"}


def test_score_wed_degenerate_matches_ed(capsys):
    a, b = "how large is the city", "how big is it"
    _, ed_out, _ = run(capsys, "score", "--method", "ed", "--a", a, "--b", b)
    _, wed_out, _ = run(capsys, "score", "--method", "wed", "--lambda", "0", "--mu", "0",
                        "--no-embedding", "--a", a, "--b", b)
    ed, wed = fields(ed_out), fields(wed_out)
    assert (ed["distance"], ed["score"]) == (wed["distance"], wed["score"])


def test_score_jaccard(capsys):
    code, out, _ = run(capsys, "score", "--method", "jaccard", "--a", "a b", "--b", "b c")
    assert code == 0 and fields(out)["score"] == "0.3333"


def test_score_wed_with_embeddings(capsys, data):
    code, out, _ = run(capsys, "score", "--method", "wed", "--emb", data["emb"], "--w", "2",
                       "--bias", "0.5", "--lambda", "0.5", "--mu", "0", "--a", "a b", "--b", "c b")
    assert code == 0
    assert 0.0 < float(fields(out)["distance"]) < 2.0


def test_score_embcos_and_tfidf(capsys, data):
    assert run(capsys, "score", "--method", "embcos", "--emb", data["emb"], "--a", "a", "--b", "a")[0] == 0
    code, out, _ = run(capsys, "score", "--method", "tfidf", "--train", data["dev"], "--a", "a b", "--b", "a b")
    assert code == 0 and fields(out)["score"] == "1.0000"


def test_score_needs_embeddings(capsys):
    code, _, err = run(capsys, "score", "--method", "embcos", "--a", "x", "--b", "y")
    assert code == 1 and "--emb" in err


def test_missing_embedding_file(capsys, tmp_path):
    code, _, err = run(capsys, "score", "--method", "wed", "--emb", str(tmp_path / "nope"), "--a", "x", "--b", "y")
    assert code == 2 and "cannot read" in err


def test_usage_errors_exit_1(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["score", "--method", "bleu", "--a", "x", "--b", "y"])
    assert exc.value.code == 1
    with pytest.raises(SystemExit) as exc:
        main(["eval", "--w", "inf", "--test", "t.tsv"])
    assert exc.value.code == 1


def test_align_identical(capsys):
    code, out, _ = run(capsys, "align", "--method", "ed", "--a", "the cat sat", "--b", "the cat sat")
    top, bottom = out.splitlines()
    assert code == 0 and top == bottom == "the cat sat"


def test_align_alaska_pair(capsys):
    code, out, _ = run(capsys, "align", "--method", "ed", "--a", ALASKA_A, "--b", ALASKA_B)
    top, bottom = out.splitlines()
    assert top.split() == "How large is the largest * city in Alaska * * * ?".split()
    assert bottom.split() == "* * * The * biggest city in Alaska is how big ?".split()


def test_align_against_empty(capsys):
    code, out, _ = run(capsys, "align", "--method", "ed", "--a", "a", "--b", "")
    assert out.splitlines() == ["a", "*"]


def test_align_wed(capsys, data):
    code, out, _ = run(capsys, "align", "--emb", data["emb"], "--lambda", "1", "--mu", "0",
                       "--a", "a b", "--b", "b a", "--color")
    assert code == 0 and len(out.splitlines()) == 2


def test_eval_jaccard_by_hand(capsys, data, tmp_path):
    out_path = tmp_path / "res.tsv"
    code, out, _ = run(capsys, "eval", "--method", "jaccard", "--dev", data["dev"], "--test", data["test"],
                       "--out", str(out_path))
    assert code == 0
    assert "Jaccard" in out and "0.750" in out
    rows = out_path.read_text().splitlines()
    assert rows[2].split("\t")[:3] == ["Jaccard", "toy", "test"]
    assert float(rows[2].split("\t")[-1]) == 0.75
    assert (tmp_path / "res.correctness.tsv").read_text().splitlines()[1:] == ["1\t1", "2\t0", "3\t1", "4\t1"]


def test_eval_fixed_threshold_needs_no_dev(capsys, data):
    code, out, _ = run(capsys, "eval", "--method", "ed", "--test", data["test"], "--threshold", "0.5")
    assert code == 0


def test_eval_all_methods_with_significance(capsys, data):
    code, out, _ = run(capsys, "eval", "--dev", data["dev"], "--test", data["test"], "--emb", data["emb"],
                       "--grid-search", "--grid-w", "1,4", "--grid-b", "0", "--grid-lambda", "0,0.5",
                       "--grid-mu", "0")
    assert code == 0
    for label in ("ED", "WED", "Jaccard", "TF-IDF", "Embedding", "(WED, ED)"):
        assert label in out


def test_eval_bad_dataset(capsys, tmp_path):
    code, _, err = run(capsys, "eval", "--method", "ed", "--dev", str(tmp_path / "x.tsv"),
                       "--test", str(tmp_path / "y.tsv"))
    assert code == 2


def test_tune_single_point(capsys, data):
    code, out, _ = run(capsys, "tune", "--dev", data["dev"], "--test", data["test"], "--emb", data["emb"],
                       "--grid-w", "3", "--grid-b", "-0.5", "--grid-lambda", "0.25", "--grid-mu", "0.5")
    assert code == 0
    header, _, row = out.splitlines()
    assert row.split()[:5] == ["WED", "3", "-0.5", "0.25", "0.5"]


def test_ablate_context_label(capsys, data):
    code, out, _ = run(capsys, "ablate", "--dev", data["dev"], "--test", data["test"], "--emb", data["emb"],
                       "--variant=-Context", "--grid-w", "1", "--grid-b", "0", "--grid-mu", "0,0.5")
    assert code == 0
    labels = [line.split()[0] for line in out.splitlines()[2:]]
    assert labels == ["WED", "-Context"]


def test_outputs_deterministic_across_workers(capsys, data, tmp_path):
    outputs = []
    for workers in ("1", "3", "1"):
        path = tmp_path / f"run{len(outputs)}.tsv"
        code, out, _ = run(capsys, "ablate", "--dev", data["dev"], "--test", data["test"], "--emb", data["emb"],
                           "--grid-w", "1,2", "--grid-b=-1,0", "--grid-mu=-1,0,0.5",
                           "--grid-lambda", "0,0.5,1", "--workers", workers, "--out", str(path))
        assert code == 0
        stem = str(path)[:-4]
        outputs.append((out, path.read_bytes(), open(f"{stem}.correctness.tsv", "rb").read()))
    assert outputs[0] == outputs[1] == outputs[2]
