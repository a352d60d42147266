"""Command-line interface: ``wed {score,align,eval,tune,ablate}``.

Exit codes: 0 on success, 1 on usage errors, 2 on data or I/O errors.
"""

from __future__ import annotations

import argparse
import logging
import math
import os
import sys

from wed.baselines import build_idf
from wed.core import WedParams, ed_align, edit_distance, render_alignment, wed_align, wed_distance
from wed.datasets import CPC_SIZES, DatasetError, check_size, load_split, sentences, vocabulary
from wed.embeddings import EmbeddingLoadError, load_embeddings
from wed.harness import (
    ABLATIONS,
    METHODS,
    GridSpec,
    paired_t_test,
    run_ablation,
    run_method,
    score_pair,
    tune_and_evaluate,
    write_correctness,
    write_results,
)
from wed.text import surfaces, tokenize

log = logging.getLogger("wed")

EXIT_USAGE = 1
EXIT_DATA = 2


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _finite(text: str) -> float:
    try:
        value = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None
    if not math.isfinite(value):
        raise argparse.ArgumentTypeError(f"must be finite: {text!r}")
    return value


def _float_list(text: str) -> tuple[float, ...]:
    values = tuple(_finite(t) for t in text.split(",") if t.strip())
    if not values:
        raise argparse.ArgumentTypeError("empty value list")
    return values


def _ablation(text: str) -> str:
    for name in ABLATIONS:
        if text.lower().lstrip("-") == name.lower().lstrip("-"):
            return name
    raise argparse.ArgumentTypeError(f"unknown ablation {text!r}; choose from {', '.join(ABLATIONS)}")


def _add_params(p, *, sentences=False):
    g = p.add_argument_group("WED hyperparameters")
    g.add_argument("--w", type=_finite, default=1.0, help="sigmoid scale (default 1)")
    # --b names the second sentence in score/align, so the shift is --bias there
    shift = ("--bias",) if sentences else ("--b", "--bias")
    g.add_argument(*shift, dest="bias", type=_finite, default=0.0, help="sigmoid shift (default 0)")
    g.add_argument("--lambda", dest="lam", type=_finite, default=1.0, help="context weight (default 1)")
    g.add_argument("--mu", type=_finite, default=1.0, help="context offset (default 1)")
    g.add_argument("--no-embedding", action="store_true", help="exact-match word similarity only")
    g.add_argument("--no-context", action="store_true", help="force lambda to 0")


def _add_grid(p):
    g = p.add_argument_group("grid overrides", "comma-separated values; write lists starting with a minus sign as --grid-mu=-2,-1,0")
    g.add_argument("--grid-w", type=_float_list)
    g.add_argument("--grid-b", type=_float_list)
    g.add_argument("--grid-lambda", type=_float_list)
    g.add_argument("--grid-mu", type=_float_list)


def _add_data(p, *, need_dev=True):
    p.add_argument("--dev", required=need_dev, help="dev split TSV (threshold/hyperparameter tuning)")
    p.add_argument("--test", required=True, help="test split TSV")
    p.add_argument("--train", help="train split TSV (only used for IDF statistics)")
    p.add_argument("--dataset", help="dataset label for result files (default: test file's directory)")
    p.add_argument("--out", help="results TSV; per-pair correctness goes next to it")
    p.add_argument("--workers", type=int, default=1, help="worker processes for grid search")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="wed", description="Word-embedding-based edit distance and baselines.")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("score", help="score one sentence pair")
    p.add_argument("--method", choices=METHODS, default="wed")
    p.add_argument("--a", required=True, help="first sentence")
    p.add_argument("--b", required=True, help="second sentence")
    p.add_argument("--emb", help="embedding text file")
    p.add_argument("--train", help="TSV split whose sentences provide IDF statistics (tfidf)")
    _add_params(p, sentences=True)

    p = sub.add_parser("align", help="show the minimum-cost alignment of a pair")
    p.add_argument("--method", choices=("ed", "wed"), default="wed")
    p.add_argument("--a", required=True)
    p.add_argument("--b", required=True)
    p.add_argument("--emb")
    p.add_argument("--color", action="store_true", help="highlight aligned pairs with ANSI colors")
    _add_params(p, sentences=True)

    p = sub.add_parser("eval", help="tune thresholds on dev and report test accuracy")
    p.add_argument("--method", action="append", choices=METHODS,
                   help="method to run (repeatable; default: all available)")
    p.add_argument("--emb")
    p.add_argument("--threshold", type=_finite, help="fixed threshold instead of dev tuning")
    p.add_argument("--grid-search", action="store_true",
                   help="grid-search WED hyperparameters on dev instead of using --w/--b/...")
    _add_data(p, need_dev=False)
    _add_params(p)
    _add_grid(p)

    p = sub.add_parser("tune", help="grid-search WED hyperparameters on dev")
    p.add_argument("--emb")
    _add_data(p)
    p.add_argument("--no-embedding", action="store_true")
    p.add_argument("--no-context", action="store_true")
    _add_grid(p)

    p = sub.add_parser("ablate", help="WED with embedding or context disabled")
    p.add_argument("--emb")
    p.add_argument("--variant", action="append", type=_ablation,
                   help="-Embedding or -Context (repeatable; use --variant=-Context); default both")
    _add_data(p)
    _add_grid(p)
    return parser


# --------------------------------------------------------------------------
# helpers


def _params(args) -> WedParams:
    return WedParams(args.w, args.bias, args.lam, args.mu,
                     use_embedding=not args.no_embedding, use_context=not args.no_context)


def _grid(args, *, use_embedding=True, use_context=True) -> GridSpec:
    defaults = GridSpec()
    return GridSpec(
        w_values=args.grid_w or defaults.w_values,
        b_values=args.grid_b or defaults.b_values,
        lambda_values=args.grid_lambda or defaults.lambda_values,
        mu_values=args.grid_mu or defaults.mu_values,
        use_embedding=use_embedding,
        use_context=use_context,
    )


def _load_table(path, vocab):
    if path is None:
        return None
    table = load_embeddings(path, vocab_filter=vocab)
    log.info("loaded %d vectors of dim %d from %s", len(table), table.dim, path)
    return table


def _load_splits(args):
    splits = {}
    for name in ("train", "dev", "test"):
        path = getattr(args, name, None)
        if path:
            splits[name] = load_split(path, name)
    dataset = args.dataset or os.path.basename(os.path.dirname(os.path.abspath(args.test))) or "dataset"
    if dataset.lower() == "cpc":
        for name, size in CPC_SIZES.items():
            if name in splits:
                check_size(splits[name], size)
    return splits, dataset


def _idf(splits):
    docs = [s for s in (splits.get("train"), splits.get("dev")) if s is not None]
    if not docs:
        return None
    return build_idf(sentences(docs))


def _table(rows, header):
    widths = [max(len(str(r[k])) for r in [header] + rows) for k in range(len(header))]
    line = lambda r: "  ".join(str(c).ljust(w) for c, w in zip(r, widths)).rstrip()
    return "\n".join([line(header), line(["-" * w for w in widths])] + [line(r) for r in rows])


def _write_outputs(args, dataset, test_split, reports_all, test_reports):
    if not args.out:
        return
    write_results(args.out, dataset, reports_all)
    stem, _ = os.path.splitext(args.out)
    write_correctness(f"{stem}.correctness.tsv", test_split, test_reports)


def _significance(test_reports):
    wed = next((r for r in test_reports if r.method == "WED"), None)
    rows = []
    if wed is None:
        return rows
    for r in test_reports:
        if r is wed:
            continue
        t, conf = paired_t_test(wed.correctness, r.correctness)
        rows.append([f"(WED, {r.method})", f"{t:.2f}", f"{100 * conf:.0f}%"])
    return rows


# --------------------------------------------------------------------------
# commands


def cmd_score(args) -> int:
    a, b = tokenize(args.a), tokenize(args.b)
    params = _params(args)
    needs_emb = args.method == "embcos" or (args.method == "wed" and params.use_embedding)
    if needs_emb and not args.emb:
        raise UsageError(f"--method {args.method} needs --emb (or --no-embedding for wed)")
    table = _load_table(args.emb, set(a) | set(b)) if needs_emb else None
    idf = None
    if args.method == "tfidf":
        docs = [load_split(args.train, "train")] if args.train else []
        idf = build_idf(sentences(docs)) if docs else build_idf([a, b])
    print(f"method\t{args.method}")
    if args.method == "ed":
        print(f"distance\t{edit_distance(a, b):.4f}")
    elif args.method == "wed":
        print(f"distance\t{wed_distance(a, b, table, params):.4f}")
    score = score_pair(args.method, a, b, table=table, idf=idf, params=params)
    print(f"score\t{score:.4f}")
    return 0


def cmd_align(args) -> int:
    a, b = tokenize(args.a), tokenize(args.b)
    if args.method == "ed":
        alignment = ed_align(a, b)
    else:
        params = _params(args)
        if params.use_embedding and not args.emb:
            raise UsageError("--method wed needs --emb (or --no-embedding)")
        table = _load_table(args.emb, set(a) | set(b)) if params.use_embedding else None
        alignment = wed_align(a, b, table, params)
    top, bottom = render_alignment(alignment, surfaces(a), surfaces(b), color=args.color)
    print(top)
    print(bottom)
    return 0


def cmd_eval(args) -> int:
    methods = args.method or [m for m in METHODS if args.emb or m not in ("wed", "embcos")]
    params = _params(args)
    needs_emb = "embcos" in methods or ("wed" in methods and params.use_embedding)
    if needs_emb and not args.emb:
        raise UsageError("embedding methods need --emb")
    if args.threshold is None and not args.dev:
        raise UsageError("--dev is required unless --threshold is given")
    if args.grid_search and not args.dev:
        raise UsageError("--grid-search needs --dev")
    splits, dataset = _load_splits(args)
    table = _load_table(args.emb, vocabulary(splits.values())) if needs_emb else None
    idf = _idf(splits)
    dev, test = splits.get("dev"), splits["test"]

    all_reports, test_reports = [], []
    for m in methods:
        if m == "wed" and args.grid_search:
            grid = _grid(args, use_embedding=params.use_embedding, use_context=params.use_context)
            dev_report, test_report = tune_and_evaluate(grid, dev, test, table, args.workers)
        else:
            dev_report, test_report = run_method(m, dev, test, table=table, idf=idf,
                                                 params=params, threshold=args.threshold)
        all_reports += [r for r in (dev_report, test_report) if r is not None]
        test_reports.append(test_report)

    rows = [[r.method, f"{r.threshold:.4f}", f"{r.accuracy:.3f}"] for r in test_reports]
    print(_table(rows, [dataset, "threshold", "test acc"]))
    sig = _significance(test_reports)
    if sig:
        print()
        print(_table(sig, ["pair", "t", "confidence"]))
    _write_outputs(args, dataset, test, all_reports, test_reports)
    return 0


def cmd_tune(args) -> int:
    splits, dataset = _load_splits(args)
    grid = _grid(args, use_embedding=not args.no_embedding, use_context=not args.no_context)
    if grid.use_embedding and not args.emb:
        raise UsageError("tune needs --emb (or --no-embedding)")
    table = _load_table(args.emb, vocabulary(splits.values())) if grid.use_embedding else None
    dev_report, test_report = tune_and_evaluate(grid, splits["dev"], splits["test"], table, args.workers)
    p = dev_report.params
    rows = [["WED", f"{p.w:g}", f"{p.b:g}", f"{p.lam:g}", f"{p.mu:g}", f"{dev_report.threshold:.4f}",
             f"{dev_report.accuracy:.3f}", f"{test_report.accuracy:.3f}"]]
    print(_table(rows, [dataset, "w", "b", "lambda", "mu", "threshold", "dev acc", "test acc"]))
    _write_outputs(args, dataset, splits["test"], [dev_report, test_report], [test_report])
    return 0


def cmd_ablate(args) -> int:
    if not args.emb:
        raise UsageError("ablate needs --emb")
    splits, dataset = _load_splits(args)
    table = _load_table(args.emb, vocabulary(splits.values()))
    dev, test = splits["dev"], splits["test"]
    grid = _grid(args)
    variants = list(dict.fromkeys(args.variant or ABLATIONS))
    _, full = tune_and_evaluate(grid, dev, test, table, args.workers)
    reports = [full] + [run_ablation(v, dev, test, grid, table, args.workers) for v in variants]
    rows = [[r.method, f"{r.accuracy:.3f}"] for r in reports]
    print(_table(rows, [dataset, "test acc"]))
    _write_outputs(args, dataset, test, reports, reports)
    return 0


COMMANDS = {
    "score": cmd_score,
    "align": cmd_align,
    "eval": cmd_eval,
    "tune": cmd_tune,
    "ablate": cmd_ablate,
}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s: %(message)s")
    try:
        return COMMANDS[args.command](args)
    except UsageError as exc:
        print(f"wed {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (DatasetError, EmbeddingLoadError, OSError) as exc:
        print(f"wed {args.command}: {exc}", file=sys.stderr)
        return EXIT_DATA
    except ValueError as exc:
        print(f"wed {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_DATA


if __name__ == "__main__":
    sys.exit(main())
