"""Command-line front end: ingest -> chunk -> score -> eval -> report.

Pipeline stages communicate only through documented file formats, so
externally computed score files slot in between `chunk` and `eval`. Exit
codes: 0 success, 1 usage error, 2 data error. Same inputs and flags always
produce byte-identical outputs.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import __version__
from .chunker import chunk_corpus, load_labeled_chunks, save_labeled_chunks
from .corpus import SupportLevel, corpus_stats, load_corpus, validate
from .errors import DataError
from .protocols import (
    PROTOCOL_NAMES,
    EvaluationConfig,
    build_retrieval_pools,
    evaluate_metrics,
)
from .report import (
    FORMATS,
    RunManifest,
    corpus_fingerprint,
    export_run,
    load_run,
    render_table,
    scores_fingerprint,
)
from .scoring import BASELINE_METRICS, compute_baseline_scores, load_scores, save_scores

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_DATA = 2


class _Parser(argparse.ArgumentParser):
    # argparse exits with 2 on usage errors; the CLI contract reserves 2 for
    # data errors, so remap.
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_USAGE)


def _add_config_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--max-words", type=int, default=150,
                        help="chunk word limit (default: 150)")
    parser.add_argument("--jaccard-threshold", type=float, default=0.7,
                        help="evidence match threshold (default: 0.7)")
    parser.add_argument("--cutoffs", default="5,10,20",
                        help="NDCG cutoffs, comma separated (default: 5,10,20)")
    parser.add_argument("--gain", choices=["exponential", "linear"], default="exponential",
                        help="NDCG gain function (default: exponential)")
    parser.add_argument("--kendall-variant", choices=["tau_b", "tau_a"], default="tau_b",
                        help="Kendall variant (default: tau_b)")
    parser.add_argument("--aggregation",
                        choices=["chunk_level", "citation_max", "citation_mean"],
                        default="chunk_level",
                        help="evaluation granularity (default: chunk_level)")
    parser.add_argument("--pool-policy",
                        choices=["cited_docs", "cited_docs_plus_distractors"],
                        default="cited_docs",
                        help="retrieval pool policy (default: cited_docs)")
    parser.add_argument("--distractors", type=int, default=0, metavar="K",
                        help="distractor chunks per pool (default: 0)")
    parser.add_argument("--seed", type=int, default=0,
                        help="random seed for distractor sampling (default: 0)")
    parser.add_argument("--include-zero-ideal", action="store_true",
                        help="count statements with no relevant chunk as NDCG 0 "
                             "instead of excluding them")


def _config_from_args(args) -> EvaluationConfig:
    try:
        cutoffs = tuple(int(c) for c in str(args.cutoffs).split(",") if c.strip())
        return EvaluationConfig(
            ndcg_cutoffs=cutoffs,
            gain=args.gain,
            kendall_variant=args.kendall_variant,
            jaccard_threshold=args.jaccard_threshold,
            chunk_max_words=args.max_words,
            aggregation=args.aggregation,
            pool_policy=args.pool_policy,
            distractors=args.distractors,
            seed=args.seed,
            include_zero_ideal=args.include_zero_ideal,
        )
    except ValueError as exc:
        print(f"citealign: error: {exc}", file=sys.stderr)
        raise SystemExit(EXIT_USAGE) from None


def _cmd_ingest(args) -> int:
    corpus = load_corpus(args.corpus)
    report = validate(corpus)
    if not report.ok:
        for violation in report.violations:
            print(violation, file=sys.stderr)
        return EXIT_DATA
    counts = corpus_stats(corpus)
    print(f"statements  {len(corpus.statements)}")
    print(f"citations   {len(corpus.citations)}")
    print("pairs by support level:")
    print(f"  full      {counts.full}")
    print(f"  partial   {counts.partial}")
    print(f"  none      {counts.none}")
    print(f"  total     {counts.total}")
    return EXIT_OK


def _cmd_chunk(args) -> int:
    corpus = load_corpus(args.corpus)
    labeled = chunk_corpus(
        corpus, max_words=args.max_words, threshold=args.jaccard_threshold
    )
    save_labeled_chunks(labeled, args.out)
    n_labeled = sum(1 for lc in labeled if lc.label is not SupportLevel.NONE)
    print(f"wrote {len(labeled)} labeled chunks ({n_labeled} full/partial) to {args.out}")
    return EXIT_OK


def _pool_pairs(corpus, labeled, config) -> set[tuple[str, str, int]]:
    pools = build_retrieval_pools(corpus, labeled, config)
    return {
        (sid, entry.citation_id, entry.chunk_index)
        for sid, entries in pools.pools.items()
        for entry in entries
    }


def _cmd_score(args) -> int:
    config = _config_from_args(args)
    corpus = load_corpus(args.corpus)
    labeled = load_labeled_chunks(args.chunks)
    metrics = args.metric or sorted(BASELINE_METRICS)
    table = compute_baseline_scores(
        corpus, labeled, metrics, extra_pairs=_pool_pairs(corpus, labeled, config)
    )
    save_scores(table, args.out)
    print(f"wrote {len(table)} scores for {len(metrics)} metrics to {args.out}")
    return EXIT_OK


def _cmd_eval(args) -> int:
    config = _config_from_args(args)
    corpus = load_corpus(args.corpus)
    labeled = load_labeled_chunks(args.chunks)
    table = load_scores(args.scores)
    metrics = args.metric or sorted(table.metric_names)
    if not metrics:
        print("citealign: error: score file contains no metrics", file=sys.stderr)
        return EXIT_DATA
    protocols = PROTOCOL_NAMES if args.protocol == "all" else (args.protocol,)
    results = evaluate_metrics(corpus, labeled, table, metrics, config, protocols)
    for protocol in protocols:
        print(f"## {protocol}")
        print(render_table(results, protocol, format=args.format))
    if args.out:
        manifest = RunManifest(
            corpus_fingerprint=corpus_fingerprint(corpus),
            config_fingerprint=config.fingerprint(),
            scores_fingerprint=scores_fingerprint(table),
            metrics=tuple(sorted(set(metrics))),
            created_at=args.timestamp,
        )
        export_run(results, manifest, args.out)
        print(f"exported run to {args.out}")
    return EXIT_OK


def _cmd_report(args) -> int:
    results, _ = load_run(args.results)
    protocols = PROTOCOL_NAMES if args.protocol == "all" else (args.protocol,)
    rendered = []
    for protocol in protocols:
        rendered.append(f"## {protocol}")
        rendered.append(render_table(results, protocol, format=args.format))
    text = "\n".join(rendered)
    if args.out:
        Path(args.out).write_text(text, encoding="utf-8")
        print(f"wrote report to {args.out}")
    else:
        print(text)
    return EXIT_OK


def _build_parser() -> _Parser:
    parser = _Parser(prog="citealign", description=__doc__)
    parser.add_argument("--version", action="version", version=f"citealign {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("ingest", help="validate a corpus and print support-level counts")
    p.add_argument("--corpus", required=True, help="corpus JSONL file")
    p.set_defaults(func=_cmd_ingest)

    p = sub.add_parser("chunk", help="chunk cited documents and propagate labels")
    p.add_argument("--corpus", required=True)
    p.add_argument("--out", required=True, help="labeled-chunk JSONL output")
    p.add_argument("--max-words", type=int, default=150,
                   help="chunk word limit (default: 150)")
    p.add_argument("--jaccard-threshold", type=float, default=0.7,
                   help="evidence match threshold (default: 0.7)")
    p.set_defaults(func=_cmd_chunk)

    p = sub.add_parser("score", help="run baseline metrics and write a score file")
    p.add_argument("--corpus", required=True)
    p.add_argument("--chunks", required=True, help="labeled-chunk JSONL file")
    p.add_argument("--out", required=True, help="score JSONL output")
    p.add_argument("--metric", action="append",
                   help=f"baseline metric, repeatable (default: all of {sorted(BASELINE_METRICS)})")
    _add_config_flags(p)
    p.set_defaults(func=_cmd_score)

    p = sub.add_parser("eval", help="run evaluation protocols over a score file")
    p.add_argument("--corpus", required=True)
    p.add_argument("--chunks", required=True)
    p.add_argument("--scores", required=True)
    p.add_argument("--out", help="directory for results.jsonl + manifest.json")
    p.add_argument("--metric", action="append",
                   help="metric to evaluate, repeatable (default: all in the score file)")
    p.add_argument("--protocol", choices=[*PROTOCOL_NAMES, "all"], default="all")
    p.add_argument("--format", choices=list(FORMATS), default="markdown")
    p.add_argument("--timestamp", default=None,
                   help="manifest timestamp (default: none, keeping exports reproducible)")
    _add_config_flags(p)
    p.set_defaults(func=_cmd_eval)

    p = sub.add_parser("report", help="render tables from an exported run")
    p.add_argument("--results", required=True, help="directory produced by eval --out")
    p.add_argument("--protocol", choices=[*PROTOCOL_NAMES, "all"], default="all")
    p.add_argument("--format", choices=list(FORMATS), default="markdown")
    p.add_argument("--out", help="write to file instead of stdout")
    p.set_defaults(func=_cmd_report)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except SystemExit as exc:
        return int(exc.code or 0)
    except DataError as exc:
        print(f"citealign: error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except FileNotFoundError as exc:
        print(f"citealign: error: {exc}", file=sys.stderr)
        return EXIT_DATA


if __name__ == "__main__":
    sys.exit(main())
