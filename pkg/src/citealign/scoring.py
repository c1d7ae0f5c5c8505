"""The scoring-function side of the harness: built-in lexical baselines and
ingestion of externally computed score files.

A score file is UTF-8 JSON lines, one object per scored (statement, chunk)
pair: ``{metric, statement_id, citation_id, chunk_index, score}``. This
schema is the contract between the harness and external scorer bridges.
Scores are consumed raw; nothing is normalized or imputed.
"""

from __future__ import annotations

import json
import math
from collections import Counter, defaultdict
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Iterable, Mapping, Sequence

from .chunker import LabeledChunk, jaccard, tokenize
from .errors import ScoreFileError

ScoreKey = tuple[str, str, str, "int | None"]  # (metric, statement_id, citation_id, chunk_index)


def token_f1(statement_text: str, chunk_text: str) -> float:
    """Harmonic mean of token precision and recall over token multisets."""
    a = Counter(tokenize(statement_text))
    b = Counter(tokenize(chunk_text))
    if not a or not b:
        return 0.0
    overlap = sum((a & b).values())
    if overlap == 0:
        return 0.0
    precision = overlap / sum(a.values())
    recall = overlap / sum(b.values())
    return 2 * precision * recall / (precision + recall)


def jaccard_metric(statement_text: str, chunk_text: str) -> float:
    """Token-set Jaccard similarity between statement and chunk."""
    return jaccard(statement_text, chunk_text)


BASELINE_METRICS: dict[str, Callable[[str, str], float]] = {
    "token_f1": token_f1,
    "jaccard": jaccard_metric,
}


@dataclass(frozen=True)
class MetricScore:
    """One metric score for one (statement, chunk) pair.

    chunk_index is None for citation-level aggregates.
    """

    metric: str
    statement_id: str
    citation_id: str
    chunk_index: int | None
    score: float

    @property
    def key(self) -> ScoreKey:
        return (self.metric, self.statement_id, self.citation_id, self.chunk_index)


@dataclass(frozen=True)
class Coverage:
    """Missing/extra (statement_id, citation_id, chunk_index) keys per metric."""

    missing: Mapping[str, tuple]
    extra: Mapping[str, tuple]

    @property
    def complete(self) -> bool:
        return not any(self.missing.values()) and not any(self.extra.values())


class ScoreTable:
    """Immutable collection of metric scores with unique (metric, pair) keys."""

    def __init__(self, scores: Iterable[MetricScore], coverage: Coverage | None = None):
        self._scores: dict[ScoreKey, float] = {}
        for s in scores:
            if not math.isfinite(s.score):
                raise ValueError(f"non-finite score for {s.key}")
            if s.key in self._scores:
                raise ValueError(f"duplicate score for {s.key}")
            self._scores[s.key] = s.score
        self.coverage = coverage

    @property
    def metric_names(self) -> frozenset[str]:
        return frozenset(key[0] for key in self._scores)

    def __len__(self) -> int:
        return len(self._scores)

    def __eq__(self, other: object) -> bool:
        return isinstance(other, ScoreTable) and self._scores == other._scores

    def get(
        self, metric: str, statement_id: str, citation_id: str, chunk_index: int | None
    ) -> float | None:
        return self._scores.get((metric, statement_id, citation_id, chunk_index))

    def records(self) -> list[MetricScore]:
        """All scores in deterministic key order."""
        return [
            MetricScore(m, sid, cid, idx, self._scores[(m, sid, cid, idx)])
            for (m, sid, cid, idx) in sorted(
                self._scores, key=lambda k: (k[0], k[1], k[2], -1 if k[3] is None else k[3])
            )
        ]

    def pair_keys(self, metric: str) -> set[tuple[str, str, int | None]]:
        return {(sid, cid, idx) for (m, sid, cid, idx) in self._scores if m == metric}


def load_scores(
    path: str | Path,
    expected_pairs: set[tuple[str, str, int]] | None = None,
) -> ScoreTable:
    """Load a score file; duplicate keys and non-finite scores are hard errors.

    When expected_pairs is given, the returned table carries a per-metric
    Coverage report of missing and extra (statement_id, citation_id,
    chunk_index) keys.
    """
    scores: dict[ScoreKey, float] = {}
    with open(path, "r", encoding="utf-8") as f:
        for line_no, line in enumerate(f, start=1):
            if not line.strip():
                continue
            try:
                record = json.loads(line)
            except json.JSONDecodeError as exc:
                raise ScoreFileError(f"line {line_no}: invalid JSON: {exc}") from None
            try:
                metric = record["metric"]
                statement_id = record["statement_id"]
                citation_id = record["citation_id"]
                chunk_index = record["chunk_index"]
                score = record["score"]
            except KeyError as exc:
                raise ScoreFileError(f"line {line_no}: missing field {exc}") from None
            if chunk_index is not None:
                if not isinstance(chunk_index, int) or isinstance(chunk_index, bool):
                    raise ScoreFileError(f"line {line_no}: chunk_index must be an integer")
            if not isinstance(score, (int, float)) or isinstance(score, bool):
                raise ScoreFileError(f"line {line_no}: score must be a number")
            score = float(score)
            if not math.isfinite(score):
                raise ScoreFileError(f"non-finite score at line {line_no}")
            key = (metric, statement_id, citation_id, chunk_index)
            if key in scores:
                raise ScoreFileError(f"line {line_no}: duplicate score for {key}")
            scores[key] = score

    coverage = None
    if expected_pairs is not None:
        metrics = sorted({k[0] for k in scores})
        present: dict[str, set] = {m: set() for m in metrics}
        for (m, sid, cid, idx) in scores:
            present[m].add((sid, cid, idx))
        coverage = Coverage(
            missing={m: tuple(sorted(expected_pairs - present[m])) for m in metrics},
            extra={m: tuple(sorted(present[m] - expected_pairs)) for m in metrics},
        )
    return ScoreTable(
        (MetricScore(*key, score) for key, score in scores.items()), coverage=coverage
    )


def save_scores(table: ScoreTable, path: str | Path) -> None:
    """Write the canonical score-file serialization (lossless round-trip)."""
    with open(path, "w", encoding="utf-8") as f:
        for line in score_lines(table):
            f.write(line + "\n")


def score_lines(table: ScoreTable) -> list[str]:
    return [
        json.dumps(
            {
                "metric": s.metric,
                "statement_id": s.statement_id,
                "citation_id": s.citation_id,
                "chunk_index": s.chunk_index,
                "score": s.score,
            },
            ensure_ascii=False,
        )
        for s in table.records()
    ]


AGGREGATION_STRATEGIES = ("max", "mean")


def aggregate_to_citation(table: ScoreTable, strategy: str = "max") -> ScoreTable:
    """Collapse chunk scores to one score per (metric, statement, citation).

    The result is keyed with chunk_index None. max is the default strategy:
    ranking a citation by its best-supporting chunk mirrors how the protocols
    pick the highest-support citation.
    """
    if strategy not in AGGREGATION_STRATEGIES:
        raise ValueError(
            f"unknown aggregation strategy {strategy!r}; expected one of {AGGREGATION_STRATEGIES}"
        )
    grouped: dict[tuple[str, str, str], list[float]] = defaultdict(list)
    for s in table.records():
        if s.chunk_index is None:
            continue
        grouped[(s.metric, s.statement_id, s.citation_id)].append(s.score)
    aggregated = []
    for (metric, sid, cid), values in grouped.items():
        value = max(values) if strategy == "max" else sum(values) / len(values)
        aggregated.append(MetricScore(metric, sid, cid, None, value))
    return ScoreTable(aggregated)


def compute_baseline_scores(
    corpus,
    labeled: Sequence[LabeledChunk],
    metrics: Sequence[str] = ("token_f1", "jaccard"),
    extra_pairs: Iterable[tuple[str, str, int]] = (),
) -> ScoreTable:
    """Run built-in baseline metrics over every labeled (statement, chunk) pair.

    extra_pairs adds (statement_id, citation_id, chunk_index) keys beyond the
    labeled ones, e.g. retrieval-pool pairs; their chunk text must appear
    somewhere in the labeled set.
    """
    for name in metrics:
        if name not in BASELINE_METRICS:
            raise ValueError(
                f"unknown baseline metric {name!r}; expected one of {sorted(BASELINE_METRICS)}"
            )
    chunk_text: dict[tuple[str, int], str] = {}
    keys: set[tuple[str, str, int]] = set()
    for lc in labeled:
        chunk_text[(lc.chunk.citation_id, lc.chunk.index)] = lc.chunk.text
        keys.add((lc.statement_id, lc.chunk.citation_id, lc.chunk.index))
    for key in extra_pairs:
        keys.add(tuple(key))

    scores = []
    for sid, cid, idx in sorted(keys):
        statement_text = corpus.statement(sid).text
        text = chunk_text.get((cid, idx))
        if text is None:
            raise ValueError(f"no chunk text known for ({cid}, {idx})")
        for name in metrics:
            scores.append(
                MetricScore(name, sid, cid, idx, BASELINE_METRICS[name](statement_text, text))
            )
    return ScoreTable(scores)
