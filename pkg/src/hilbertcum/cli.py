"""Command-line interface.

Every failure is reported on stderr as one JSON object
``{"error": ..., "message": ..., "column": ...}`` with a nonzero exit status.
"""
from __future__ import annotations

import argparse
import csv
import json
import sys
from concurrent.futures import ProcessPoolExecutor

import numpy as np

from .compare import compare_full, compare_two, score_covariates
from .ingest import ColumnSpec, IngestError, load_csv, write_csv
from .report import RenderConfig, render_graph, render_ordering_scatter, summary
from .synth import SynthConfig, generate

EXIT_USAGE = 2
EXIT_INVALID = 3
EXIT_IO = 4


class CliError(Exception):
    def __init__(self, kind, message, status, column=None):
        super().__init__(message)
        self.kind = kind
        self.status = status
        self.column = column


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise CliError("usage", message, EXIT_USAGE)


def _names(text):
    return [c.strip() for c in text.split(",") if c.strip()]


def _add_scoring(sp):
    sp.add_argument("--input", required=True, help="CSV file with a header row")
    sp.add_argument("--covariates", required=True, type=_names, help="comma-separated covariate columns")
    sp.add_argument("--order", type=_names, help="covariate columns in curve order (default: --covariates order)")
    sp.add_argument("--reverse", action="store_true", help="reverse the covariate order")
    sp.add_argument("--normalize", choices=["minmax", "maxdiv", "none"], default="minmax")
    sp.add_argument("--jitter-seed", type=int, default=0)
    sp.add_argument("--jitter-rel", type=float, default=1e-8)
    sp.add_argument("--bits-per-dim", type=int)
    sp.add_argument("--weights-col")
    sp.add_argument("--delimiter", default=",")


def _add_outputs(sp):
    sp.add_argument("--response", required=True, help="response column")
    sp.add_argument("--json-out")
    sp.add_argument("--svg-out")
    sp.add_argument("--scatter-out", help="SVG scatter of the first two curve-order covariates")
    sp.add_argument("--title")
    sp.add_argument("--triangle-multiplier", type=float)
    sp.add_argument("--both-orders", action="store_true", help="also report G/sigma and H/sigma for the reversed order")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="hilbertcum",
                     description="Order covariates along a Hilbert curve and compare subpopulations.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    sp = sub.add_parser("scores", help="write Hilbert scores for each row")
    _add_scoring(sp)
    sp.add_argument("--output", required=True)

    sp = sub.add_parser("compare-full", help="subpopulation versus full population")
    _add_scoring(sp)
    _add_outputs(sp)
    sp.add_argument("--subpop-col", required=True)
    sp.add_argument("--subpop-value", default="1", help="value marking subpopulation rows (default 1)")

    sp = sub.add_parser("compare-two", help="subpopulation 0 versus subpopulation 1")
    _add_scoring(sp)
    _add_outputs(sp)
    sp.add_argument("--label-col", required=True)
    sp.add_argument("--label0", default="0")
    sp.add_argument("--label1", default="1")

    sp = sub.add_parser("synth", help="write a synthetic dataset")
    sp.add_argument("--m", type=int, default=1000)
    sp.add_argument("--n", type=int, default=100)
    sp.add_argument("--p", type=int, default=2)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--null", action="store_true", help="leave subpopulation responses untouched")
    sp.add_argument("--output", required=True)

    sp = sub.add_parser("reproduce-synthetic", help="summary table over numbers of covariates and seeds")
    sp.add_argument("--p", type=_names, default=["2", "4", "8", "16", "32", "64"])
    sp.add_argument("--seeds", type=int, default=1, help="seeds 0..N-1")
    sp.add_argument("--m", type=int, default=1000)
    sp.add_argument("--n", type=int, default=100)
    sp.add_argument("--null", action="store_true")
    sp.add_argument("--jobs", type=int, default=1)
    sp.add_argument("--json-out")
    sp.add_argument("--csv-out")
    return parser


def _score_kw(args, names):
    order = None
    if args.order:
        missing = [c for c in args.order if c not in names]
        if missing or sorted(args.order) != sorted(names):
            raise CliError("invalid", f"--order must list each covariate once; got {args.order}", EXIT_INVALID,
                           column=(missing or [None])[0])
        order = [names.index(c) for c in args.order]
    return dict(order=order, reverse=args.reverse, normalization=args.normalize,
                jitter_seed=args.jitter_seed, jitter_rel=args.jitter_rel, bits_per_dim=args.bits_per_dim,
                names=names)


def _load(args, response=None, label_col=None, label_values=None, subset_cols=()):
    spec = ColumnSpec(
        covariate_columns=args.covariates,
        response_column=response,
        weight_column=args.weights_col,
        label_column=label_col,
        label_values=label_values,
        subset_columns=subset_cols,
        delimiter=args.delimiter,
    )
    return load_csv(args.input, spec)


def _write(path, text):
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(text)


def _cmd_scores(args):
    data = _load(args)
    sv = score_covariates(data.covariates, **_score_kw(args, data.covariate_names))
    rank = np.empty(len(sv), dtype=int)
    rank[sv.permutation] = np.arange(len(sv))
    with open(args.output, "w", newline="", encoding="utf-8") as fh:
        out = csv.writer(fh, lineterminator="\n")
        out.writerow(["row", "score", "rank", "hilbert_index"])
        for i in range(len(sv)):
            out.writerow([i, repr(float(sv.scores[i])), int(rank[i]), sv.indices[i]])


def _emit(args, graph, kind, run_reverse, data, subpop=None, labels=None):
    kw = _score_kw(args, data.covariate_names)
    config = {k: v for k, v in graph.extra.items()}
    config.update(input=args.input, covariates=data.covariate_names, response=args.response,
                  weights_col=args.weights_col)
    doc = summary(graph, kind, config)
    if args.both_orders:
        rev = run_reverse(dict(kw, reverse=not args.reverse))
        doc["reversed"] = {k: summary(rev, kind)[k] for k in ("G", "H", "sigma", "G_over_sigma", "H_over_sigma")}
    cfg = RenderConfig(**{k: v for k, v in (("title", args.title), ("triangle_multiplier", args.triangle_multiplier))
                          if v is not None})
    if args.svg_out:
        _write(args.svg_out, render_graph(graph, cfg))
    if args.scatter_out:
        order = graph.extra["order"][:2]
        if len(order) < 2:
            raise CliError("invalid", "--scatter-out needs at least two covariates", EXIT_INVALID)
        names = [data.covariate_names[j] for j in order]
        if labels is None:
            sv = score_covariates(data.covariates, **kw)
            svg = render_ordering_scatter(data.covariates[:, order], sv.scores, subpop=subpop, names=names)
        else:
            keep = labels >= 0
            sv = score_covariates(data.covariates[keep], **kw)
            svg = render_ordering_scatter(data.covariates[keep][:, order], sv.scores, labels=labels[keep],
                                          names=names)
        _write(args.scatter_out, svg)
    text = json.dumps(doc, indent=1, allow_nan=False)
    if args.json_out:
        _write(args.json_out, text + "\n")
    else:
        keys = ("kind", "n", "m", "G", "H", "sigma", "G_over_sigma", "H_over_sigma", "reversed")
        print(json.dumps({k: doc[k] for k in keys if k in doc}))


def _cmd_compare_full(args):
    data = _load(args, response=args.response, label_col=args.subpop_col,
                 label_values={args.subpop_value: 1})
    subpop = data.labels == 1
    if not subpop.any():
        raise CliError("invalid", f"no rows have {args.subpop_col} == {args.subpop_value!r}", EXIT_INVALID,
                       column=args.subpop_col)
    kw = _score_kw(args, data.covariate_names)
    run = lambda k: compare_full(data.covariates, data.responses, subpop, data.weights, **k)  # noqa: E731
    _emit(args, run(kw), "full", run, data, subpop=subpop)


def _cmd_compare_two(args):
    data = _load(args, response=args.response, label_col=args.label_col,
                 label_values={args.label0: 0, args.label1: 1})
    kw = _score_kw(args, data.covariate_names)
    run = lambda k: compare_two(data.covariates, data.responses, data.labels, data.weights, **k)  # noqa: E731
    _emit(args, run(kw), "two", run, data, labels=data.labels)


def _cmd_synth(args):
    data, _ = generate(SynthConfig(m=args.m, n=args.n, p=args.p, seed=args.seed, force_subpop_ones=not args.null))
    write_csv(data, args.output)


def synthetic_row(p, seed, m=1000, n=100, null=False):
    """Forward and reversed statistics for one synthetic draw."""
    data, subpop = generate(SynthConfig(m=m, n=n, p=p, seed=seed, force_subpop_ones=not null))
    row = {"p": p, "seed": seed}
    for tag, rev in (("", False), ("rev_", True)):
        g = compare_full(data.covariates, data.responses, subpop, normalization="none", jitter_rel=0.0,
                         reverse=rev)
        row.update({f"{tag}G": g.ks, f"{tag}H": g.kuiper, f"{tag}sigma": g.sigma,
                    f"{tag}G_over_sigma": g.ks_over_sigma, f"{tag}H_over_sigma": g.kuiper_over_sigma})
    return row


def _synthetic_task(job):
    return synthetic_row(*job)


def _cmd_reproduce(args):
    try:
        ps = [int(p) for p in args.p]
    except ValueError:
        raise CliError("invalid", f"--p must be integers, got {args.p}", EXIT_INVALID)
    jobs = [(p, s, args.m, args.n, args.null) for p in ps for s in range(args.seeds)]
    if args.jobs > 1:
        with ProcessPoolExecutor(max_workers=args.jobs) as pool:
            rows = list(pool.map(_synthetic_task, jobs))
    else:
        rows = [_synthetic_task(j) for j in jobs]
    cols = ["p", "seed", "G", "H", "G_over_sigma", "H_over_sigma", "rev_G_over_sigma", "rev_H_over_sigma"]
    print(" ".join(f"{c:>16}" for c in cols))
    for r in rows:
        print(" ".join(f"{r[c]:>16}" if c in ("p", "seed") else f"{r[c]:>16.4g}" for c in cols))
    if args.csv_out:
        with open(args.csv_out, "w", newline="", encoding="utf-8") as fh:
            out = csv.DictWriter(fh, fieldnames=list(rows[0]), lineterminator="\n")
            out.writeheader()
            out.writerows(rows)
    if args.json_out:
        _write(args.json_out, json.dumps({"schema": "hilbertcum.synthetic/1", "null": args.null, "m": args.m,
                                          "n": args.n, "rows": rows}, indent=1) + "\n")


COMMANDS = {
    "scores": _cmd_scores,
    "compare-full": _cmd_compare_full,
    "compare-two": _cmd_compare_two,
    "synth": _cmd_synth,
    "reproduce-synthetic": _cmd_reproduce,
}


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
        COMMANDS[args.command](args)
    except CliError as exc:
        return _fail(exc.kind, str(exc), exc.status, exc.column)
    except IngestError as exc:
        return _fail("invalid-input", str(exc), EXIT_INVALID, exc.column)
    except (FileNotFoundError, PermissionError, IsADirectoryError) as exc:
        return _fail("io", str(exc), EXIT_IO)
    except ValueError as exc:
        return _fail("invalid", str(exc), EXIT_INVALID)
    return 0


def _fail(kind, message, status, column=None):
    print(json.dumps({"error": kind, "message": message, "column": column}), file=sys.stderr)
    return status


if __name__ == "__main__":
    sys.exit(main())
