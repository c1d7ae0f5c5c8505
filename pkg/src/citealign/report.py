"""Rendering and export of protocol results.

Tables mirror the shape of the published result tables: correlation
coefficients at 3 decimals, classification ROC-AUC as percentages at 2
decimals, retrieval NDCG at 3 decimals. Undefined statistics render as
"n/a". JSON output keeps raw floats and is lossless.

Exports are deterministic: identical corpus + config + scores produce
byte-identical files.
"""

from __future__ import annotations

import csv
import hashlib
import io
import json
from dataclasses import dataclass
from pathlib import Path

from . import __version__
from .corpus import Corpus, corpus_records
from .protocols import (
    CLASSIFICATION_SETTINGS,
    ClassificationResult,
    CorrelationResult,
    ProtocolResult,
    RetrievalResult,
)
from .scoring import ScoreTable, score_lines

FORMATS = ("markdown", "csv", "json")
PROTOCOLS = ("correlation", "classification", "retrieval")

RESULTS_FILENAME = "results.jsonl"
MANIFEST_FILENAME = "manifest.json"


def corpus_fingerprint(corpus: Corpus) -> str:
    """SHA-256 of the canonical corpus serialization."""
    digest = hashlib.sha256()
    for record in corpus_records(corpus):
        digest.update(json.dumps(record, ensure_ascii=False).encode("utf-8"))
        digest.update(b"\n")
    return digest.hexdigest()


def scores_fingerprint(table: ScoreTable) -> str:
    """SHA-256 of the canonical score-file serialization."""
    digest = hashlib.sha256()
    for line in score_lines(table):
        digest.update(line.encode("utf-8"))
        digest.update(b"\n")
    return digest.hexdigest()


@dataclass(frozen=True)
class RunManifest:
    """Provenance for one exported run.

    created_at is optional and defaults to None so that exports stay
    byte-identical across repeated runs; pass a timestamp explicitly when
    wall-clock provenance matters more than reproducibility.
    """

    corpus_fingerprint: str
    config_fingerprint: str
    scores_fingerprint: str
    metrics: tuple[str, ...]
    harness_version: str = __version__
    created_at: str | None = None

    def to_dict(self) -> dict:
        return {
            "corpus_fingerprint": self.corpus_fingerprint,
            "config_fingerprint": self.config_fingerprint,
            "scores_fingerprint": self.scores_fingerprint,
            "metrics": list(self.metrics),
            "harness_version": self.harness_version,
            "created_at": self.created_at,
        }


def _fmt(value: float | None, spec: str) -> str:
    return "n/a" if value is None else format(value, spec)


def _table_rows(results: list[ProtocolResult], protocol: str) -> tuple[list[str], list[list[str]], list[dict]]:
    ordered = sorted(results, key=lambda r: r.metric)
    if protocol == "correlation":
        header = ["Metric", "Pearson", "Spearman", "Kendall"]
        rows, raw = [], []
        for r in ordered:
            c = r.correlation
            if c is None:
                raise ValueError(f"metric {r.metric!r} has no correlation result")
            rows.append([r.metric, _fmt(c.pearson, ".3f"), _fmt(c.spearman, ".3f"), _fmt(c.kendall, ".3f")])
            raw.append({"metric": r.metric, **c.to_dict()})
        return header, rows, raw
    if protocol == "classification":
        names = [s.name for s in CLASSIFICATION_SETTINGS]
        header = ["Metric", *names, "Overall"]
        rows, raw = [], []
        for r in ordered:
            c = r.classification
            if c is None:
                raise ValueError(f"metric {r.metric!r} has no classification result")
            cells = [r.metric]
            for name in names:
                value = c.settings[name]
                cells.append(_fmt(None if value is None else 100 * value, ".2f"))
            cells.append(_fmt(None if c.overall is None else 100 * c.overall, ".2f"))
            rows.append(cells)
            raw.append({"metric": r.metric, **c.to_dict()})
        return header, rows, raw
    if protocol == "retrieval":
        cutoffs: list[int] = []
        for r in ordered:
            if r.retrieval is not None:
                cutoffs = sorted(int(n) for n in r.retrieval.mean_ndcg)
                break
        header = ["Metric", *[f"NDCG@{n}" for n in cutoffs]]
        rows, raw = [], []
        for r in ordered:
            c = r.retrieval
            if c is None:
                raise ValueError(f"metric {r.metric!r} has no retrieval result")
            rows.append([r.metric, *[_fmt(c.mean_ndcg[n], ".3f") for n in cutoffs]])
            raw.append({"metric": r.metric, **c.to_dict()})
        return header, rows, raw
    raise ValueError(f"unknown protocol {protocol!r}; expected one of {PROTOCOLS}")


def render_table(results: list[ProtocolResult], protocol: str, format: str = "markdown") -> str:
    """Render one protocol's results for all metrics, one row per metric."""
    if not results:
        raise ValueError("no results to render")
    if format not in FORMATS:
        raise ValueError(f"unknown format {format!r}; expected one of {FORMATS}")
    header, rows, raw = _table_rows(results, protocol)
    if format == "markdown":
        lines = [
            "| " + " | ".join(header) + " |",
            "| " + " | ".join("---" for _ in header) + " |",
        ]
        lines.extend("| " + " | ".join(row) + " |" for row in rows)
        return "\n".join(lines) + "\n"
    if format == "csv":
        out = io.StringIO()
        writer = csv.writer(out, lineterminator="\n")
        writer.writerow(header)
        writer.writerows(rows)
        return out.getvalue()
    return json.dumps(raw, ensure_ascii=False, indent=2) + "\n"


def _result_to_records(result: ProtocolResult) -> list[dict]:
    records = []
    sections = (
        ("correlation", result.correlation),
        ("classification", result.classification),
        ("retrieval", result.retrieval),
    )
    for protocol, section in sections:
        if section is not None:
            records.append(
                {
                    "metric": result.metric,
                    "protocol": protocol,
                    "config_fingerprint": result.config_fingerprint,
                    "result": section.to_dict(),
                }
            )
    return records


def export_run(results: list[ProtocolResult], manifest: RunManifest, out_dir: str | Path) -> None:
    """Write results.jsonl and manifest.json; re-export is byte-identical.

    Raises ValueError("fingerprint mismatch...") when the manifest's config
    fingerprint does not match the results'.
    """
    for result in results:
        if result.config_fingerprint != manifest.config_fingerprint:
            raise ValueError(
                f"fingerprint mismatch: result for {result.metric!r} has config "
                f"{result.config_fingerprint}, manifest has {manifest.config_fingerprint}"
            )
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    with open(out / RESULTS_FILENAME, "w", encoding="utf-8") as f:
        for result in sorted(results, key=lambda r: r.metric):
            for record in _result_to_records(result):
                f.write(json.dumps(record, ensure_ascii=False) + "\n")
    with open(out / MANIFEST_FILENAME, "w", encoding="utf-8") as f:
        f.write(json.dumps(manifest.to_dict(), ensure_ascii=False, indent=2, sort_keys=True) + "\n")


def load_run(out_dir: str | Path) -> tuple[list[ProtocolResult], RunManifest]:
    """Reload an exported run; inverse of export_run."""
    out = Path(out_dir)
    with open(out / MANIFEST_FILENAME, "r", encoding="utf-8") as f:
        m = json.load(f)
    manifest = RunManifest(
        corpus_fingerprint=m["corpus_fingerprint"],
        config_fingerprint=m["config_fingerprint"],
        scores_fingerprint=m["scores_fingerprint"],
        metrics=tuple(m["metrics"]),
        harness_version=m["harness_version"],
        created_at=m["created_at"],
    )
    sections: dict[str, dict[str, dict]] = {}
    with open(out / RESULTS_FILENAME, "r", encoding="utf-8") as f:
        for line in f:
            if not line.strip():
                continue
            record = json.loads(line)
            sections.setdefault(record["metric"], {})[record["protocol"]] = record["result"]

    results = []
    for metric in sorted(sections):
        parts = sections[metric]
        correlation = classification = retrieval = None
        if "correlation" in parts:
            correlation = CorrelationResult(
                pearson=parts["correlation"]["pearson"],
                spearman=parts["correlation"]["spearman"],
                kendall=parts["correlation"]["kendall"],
                n_items=parts["correlation"]["n_items"],
            )
        if "classification" in parts:
            classification = ClassificationResult(
                settings=parts["classification"]["settings"],
                overall=parts["classification"]["overall"],
                class_sizes=parts["classification"]["class_sizes"],
            )
        if "retrieval" in parts:
            retrieval = RetrievalResult(
                mean_ndcg={int(n): v for n, v in parts["retrieval"]["mean_ndcg"].items()},
                per_statement={
                    sid: {int(n): v for n, v in values.items()}
                    for sid, values in parts["retrieval"]["per_statement"].items()
                },
                evaluated=parts["retrieval"]["evaluated"],
                excluded_zero_ideal=parts["retrieval"]["excluded_zero_ideal"],
                skipped_empty_pools=parts["retrieval"]["skipped_empty_pools"],
            )
        results.append(
            ProtocolResult(
                metric=metric,
                config_fingerprint=manifest.config_fingerprint,
                correlation=correlation,
                classification=classification,
                retrieval=retrieval,
            )
        )
    return results, manifest
