"""The three evaluation protocols: correlation, one-vs-one classification,
and graded-relevance retrieval.

Each protocol measures how well one metric's scores align with the
chunk-level human labels. All runs are deterministic: items are processed in
sorted order, retrieval ties break on (citation_id, chunk_index), and
distractor sampling is seeded.
"""

from __future__ import annotations

import hashlib
import json
import random
from collections import defaultdict
from dataclasses import dataclass, field
from typing import Mapping, Sequence

from . import stats
from .chunker import LabeledChunk
from .corpus import Corpus, SupportLevel
from .errors import MissingScoreError
from .scoring import ScoreTable

GAINS = ("exponential", "linear")
KENDALL_VARIANTS = ("tau_b", "tau_a")
AGGREGATIONS = ("chunk_level", "citation_max", "citation_mean")
POOL_POLICIES = ("cited_docs", "cited_docs_plus_distractors")


def _default_level_values() -> dict[SupportLevel, float]:
    return {level: float(level.ordinal) for level in SupportLevel}


@dataclass(frozen=True)
class EvaluationConfig:
    """Every knob that can change a protocol result.

    level_values maps support levels to the numbers used for correlation
    (default FULL=2, PARTIAL=1, NONE=0). The fingerprint pins the whole
    configuration into exported results.
    """

    level_values: Mapping[SupportLevel, float] = field(default_factory=_default_level_values)
    ndcg_cutoffs: tuple[int, ...] = (5, 10, 20)
    gain: str = "exponential"
    kendall_variant: str = "tau_b"
    jaccard_threshold: float = 0.7
    chunk_max_words: int = 150
    aggregation: str = "chunk_level"
    pool_policy: str = "cited_docs"
    distractors: int = 0
    seed: int = 0
    include_zero_ideal: bool = False

    def __post_init__(self):
        if any(n < 1 for n in self.ndcg_cutoffs):
            raise ValueError("ndcg_cutoffs must be positive")
        if list(self.ndcg_cutoffs) != sorted(set(self.ndcg_cutoffs)):
            raise ValueError("ndcg_cutoffs must be strictly increasing")
        ordered = [self.level_values[level] for level in sorted(SupportLevel)]
        if not (ordered[0] < ordered[1] < ordered[2]):
            raise ValueError("level_values must be strictly increasing in support order")
        if self.gain not in GAINS:
            raise ValueError(f"gain must be one of {GAINS}")
        if self.kendall_variant not in KENDALL_VARIANTS:
            raise ValueError(f"kendall_variant must be one of {KENDALL_VARIANTS}")
        if self.aggregation not in AGGREGATIONS:
            raise ValueError(f"aggregation must be one of {AGGREGATIONS}")
        if self.pool_policy not in POOL_POLICIES:
            raise ValueError(f"pool_policy must be one of {POOL_POLICIES}")
        if not 0.0 <= self.jaccard_threshold <= 1.0:
            raise ValueError("jaccard_threshold must lie in [0, 1]")
        if self.chunk_max_words < 1:
            raise ValueError("chunk_max_words must be >= 1")
        if self.distractors < 0:
            raise ValueError("distractors must be >= 0")

    def to_dict(self) -> dict:
        return {
            "level_values": {level.value: self.level_values[level] for level in sorted(SupportLevel)},
            "ndcg_cutoffs": list(self.ndcg_cutoffs),
            "gain": self.gain,
            "kendall_variant": self.kendall_variant,
            "jaccard_threshold": self.jaccard_threshold,
            "chunk_max_words": self.chunk_max_words,
            "aggregation": self.aggregation,
            "pool_policy": self.pool_policy,
            "distractors": self.distractors,
            "seed": self.seed,
            "include_zero_ideal": self.include_zero_ideal,
        }

    def fingerprint(self) -> str:
        canonical = json.dumps(self.to_dict(), sort_keys=True, ensure_ascii=False)
        return hashlib.sha256(canonical.encode("utf-8")).hexdigest()


@dataclass(frozen=True)
class ClassificationSetting:
    """One binary task of the one-vs-one decomposition."""

    name: str
    positive: SupportLevel
    negative: SupportLevel

    def __post_init__(self):
        if not self.positive > self.negative:
            raise ValueError("positive level must be strictly above negative level")


CLASSIFICATION_SETTINGS: tuple[ClassificationSetting, ...] = (
    ClassificationSetting("FS-vs-NS", SupportLevel.FULL, SupportLevel.NONE),
    ClassificationSetting("FS-vs-PS", SupportLevel.FULL, SupportLevel.PARTIAL),
    ClassificationSetting("PS-vs-NS", SupportLevel.PARTIAL, SupportLevel.NONE),
)


def macro_average(values: Sequence[float]) -> float:
    """Unweighted arithmetic mean, as used for the overall classification score."""
    if not values:
        raise ValueError("cannot average zero values")
    return sum(values) / len(values)


@dataclass(frozen=True)
class CorrelationResult:
    pearson: float | None
    spearman: float | None
    kendall: float | None
    n_items: int

    def to_dict(self) -> dict:
        return {
            "pearson": self.pearson,
            "spearman": self.spearman,
            "kendall": self.kendall,
            "n_items": self.n_items,
        }


@dataclass(frozen=True)
class ClassificationResult:
    settings: Mapping[str, float | None]
    overall: float | None
    class_sizes: Mapping[str, int]

    def to_dict(self) -> dict:
        return {
            "settings": dict(self.settings),
            "overall": self.overall,
            "class_sizes": dict(self.class_sizes),
        }


@dataclass(frozen=True)
class RetrievalResult:
    mean_ndcg: Mapping[int, float | None]
    per_statement: Mapping[str, Mapping[int, float]]
    evaluated: int
    excluded_zero_ideal: int
    skipped_empty_pools: int

    def to_dict(self) -> dict:
        return {
            "mean_ndcg": {str(n): v for n, v in self.mean_ndcg.items()},
            "per_statement": {
                sid: {str(n): v for n, v in values.items()}
                for sid, values in self.per_statement.items()
            },
            "evaluated": self.evaluated,
            "excluded_zero_ideal": self.excluded_zero_ideal,
            "skipped_empty_pools": self.skipped_empty_pools,
        }


@dataclass(frozen=True)
class ProtocolResult:
    """All protocol outcomes for one metric under one configuration."""

    metric: str
    config_fingerprint: str
    correlation: CorrelationResult | None = None
    classification: ClassificationResult | None = None
    retrieval: RetrievalResult | None = None


def _missing_error(metric: str, missing: list) -> MissingScoreError:
    shown = ", ".join(str(key) for key in missing[:10])
    suffix = "" if len(missing) <= 10 else f" (and {len(missing) - 10} more)"
    return MissingScoreError(
        f"metric {metric!r} is missing scores for {len(missing)} keys: {shown}{suffix}"
    )


def _evaluation_items(
    labeled: Sequence[LabeledChunk],
    table: ScoreTable,
    metric: str,
    config: EvaluationConfig,
) -> list[tuple[SupportLevel, float]]:
    """(label, score) items at the configured granularity, in sorted key order."""
    missing: list[tuple] = []
    if config.aggregation == "chunk_level":
        items = []
        ordered = sorted(
            labeled, key=lambda lc: (lc.statement_id, lc.chunk.citation_id, lc.chunk.index)
        )
        for lc in ordered:
            score = table.get(metric, lc.statement_id, lc.chunk.citation_id, lc.chunk.index)
            if score is None:
                missing.append((lc.statement_id, lc.chunk.citation_id, lc.chunk.index))
            else:
                items.append((lc.label, score))
        if missing:
            raise _missing_error(metric, missing)
        return items

    grouped: dict[tuple[str, str], tuple[SupportLevel, list[float]]] = {}
    for lc in labeled:
        key = (lc.statement_id, lc.chunk.citation_id)
        score = table.get(metric, lc.statement_id, lc.chunk.citation_id, lc.chunk.index)
        if score is None:
            missing.append((lc.statement_id, lc.chunk.citation_id, lc.chunk.index))
            continue
        label, values = grouped.get(key, (SupportLevel.NONE, []))
        grouped[key] = (max(label, lc.label), values + [score])
    if missing:
        raise _missing_error(metric, sorted(set(missing)))
    items = []
    for key in sorted(grouped):
        label, values = grouped[key]
        score = max(values) if config.aggregation == "citation_max" else sum(values) / len(values)
        items.append((label, score))
    return items


def run_correlation(
    labeled: Sequence[LabeledChunk],
    table: ScoreTable,
    metric: str,
    config: EvaluationConfig,
) -> CorrelationResult:
    """Pearson/Spearman/Kendall between level values and metric scores."""
    items = _evaluation_items(labeled, table, metric, config)
    if len(items) < 2:
        raise ValueError(f"correlation needs at least 2 scored items (got {len(items)})")
    x = [config.level_values[label] for label, _ in items]
    y = [score for _, score in items]
    kendall = stats.kendall_tau_b if config.kendall_variant == "tau_b" else stats.kendall_tau_a
    return CorrelationResult(
        pearson=stats.pearson(x, y),
        spearman=stats.spearman(x, y),
        kendall=kendall(x, y),
        n_items=len(items),
    )


def run_classification(
    labeled: Sequence[LabeledChunk],
    table: ScoreTable,
    metric: str,
    config: EvaluationConfig,
) -> ClassificationResult:
    """One-vs-one ROC-AUC per setting plus the macro-averaged overall score.

    A setting with an empty class is undefined (None), and any undefined
    setting makes the overall score undefined.
    """
    items = _evaluation_items(labeled, table, metric, config)
    by_level: dict[SupportLevel, list[float]] = defaultdict(list)
    for label, score in items:
        by_level[label].append(score)

    settings: dict[str, float | None] = {}
    class_sizes = {level.value: len(by_level[level]) for level in sorted(SupportLevel, reverse=True)}
    for setting in CLASSIFICATION_SETTINGS:
        positives = by_level[setting.positive]
        negatives = by_level[setting.negative]
        if not positives or not negatives:
            settings[setting.name] = None
        else:
            settings[setting.name] = stats.roc_auc(positives, negatives)
    values = [settings[s.name] for s in CLASSIFICATION_SETTINGS]
    overall = macro_average(values) if all(v is not None for v in values) else None
    return ClassificationResult(settings=settings, overall=overall, class_sizes=class_sizes)


@dataclass(frozen=True)
class PoolEntry:
    citation_id: str
    chunk_index: int
    relevance: int


@dataclass(frozen=True)
class RetrievalPools:
    """Per-statement candidate pools; statements with empty pools are counted."""

    pools: Mapping[str, tuple[PoolEntry, ...]]
    skipped_empty: int


def build_retrieval_pools(
    corpus: Corpus,
    labeled: Sequence[LabeledChunk],
    config: EvaluationConfig,
) -> RetrievalPools:
    """Build candidate chunk pools for post-hoc retrieval evaluation.

    Under the cited_docs policy a statement's pool holds every chunk of every
    document cited anywhere in its response; chunks not annotated for the
    statement have relevance 0. The distractor policy appends
    config.distractors seeded chunks drawn from citations outside the
    response, all with relevance 0.
    """
    chunk_keys: dict[str, list[int]] = defaultdict(list)
    seen: set[tuple[str, int]] = set()
    relevance: dict[tuple[str, str, int], int] = {}
    for lc in labeled:
        key = (lc.chunk.citation_id, lc.chunk.index)
        if key not in seen:
            seen.add(key)
            chunk_keys[lc.chunk.citation_id].append(lc.chunk.index)
        relevance[(lc.statement_id, lc.chunk.citation_id, lc.chunk.index)] = (
            lc.label.relevance_label
        )
    for indices in chunk_keys.values():
        indices.sort()

    citations_by_response: dict[str, set[str]] = defaultdict(set)
    response_of = {s.id: s.response_id for s in corpus.statements}
    for pair in corpus.pairs:
        citations_by_response[response_of[pair.statement_id]].add(pair.citation_id)

    with_distractors = config.pool_policy == "cited_docs_plus_distractors"
    rng = random.Random(config.seed)
    pools: dict[str, tuple[PoolEntry, ...]] = {}
    skipped = 0
    for statement in sorted(corpus.statements, key=lambda s: s.id):
        cited = sorted(citations_by_response.get(statement.response_id, ()))
        entries = [
            PoolEntry(cid, idx, relevance.get((statement.id, cid, idx), 0))
            for cid in cited
            for idx in chunk_keys.get(cid, ())
        ]
        if with_distractors and config.distractors > 0:
            cited_set = set(cited)
            candidates = [
                (cid, idx)
                for cid in sorted(chunk_keys)
                if cid not in cited_set
                for idx in chunk_keys[cid]
            ]
            if len(candidates) < config.distractors:
                raise ValueError(
                    f"statement {statement.id}: only {len(candidates)} distractor "
                    f"candidates available, need {config.distractors}"
                )
            entries.extend(
                PoolEntry(cid, idx, 0) for cid, idx in rng.sample(candidates, config.distractors)
            )
        if not entries:
            skipped += 1
            continue
        pools[statement.id] = tuple(entries)
    return RetrievalPools(pools=pools, skipped_empty=skipped)


def run_retrieval(
    pools: RetrievalPools,
    table: ScoreTable,
    metric: str,
    config: EvaluationConfig,
) -> RetrievalResult:
    """Mean NDCG at each cutoff over score-ranked pools.

    Pools are sorted by (score descending, citation_id, chunk_index) so ties
    break deterministically. Statements whose pool has no relevant chunk are
    excluded from the means (and counted) unless include_zero_ideal is set.
    """
    missing: list[tuple] = []
    per_statement: dict[str, dict[int, float]] = {}
    excluded = 0
    for sid in sorted(pools.pools):
        entries = pools.pools[sid]
        if config.aggregation == "chunk_level":
            scored = []
            for e in entries:
                score = table.get(metric, sid, e.citation_id, e.chunk_index)
                if score is None:
                    missing.append((sid, e.citation_id, e.chunk_index))
                else:
                    scored.append((score, e.citation_id, e.chunk_index, e.relevance))
        else:
            grouped: dict[str, tuple[list[float], int]] = {}
            for e in entries:
                score = table.get(metric, sid, e.citation_id, e.chunk_index)
                if score is None:
                    missing.append((sid, e.citation_id, e.chunk_index))
                    continue
                values, rel = grouped.get(e.citation_id, ([], 0))
                grouped[e.citation_id] = (values + [score], max(rel, e.relevance))
            scored = []
            for cid in sorted(grouped):
                values, rel = grouped[cid]
                agg = max(values) if config.aggregation == "citation_max" else sum(values) / len(values)
                scored.append((agg, cid, 0, rel))
        if missing:
            continue
        scored.sort(key=lambda item: (-item[0], item[1], item[2]))
        ranking = [rel for _, _, _, rel in scored]
        if all(rel == 0 for rel in ranking) and not config.include_zero_ideal:
            excluded += 1
            continue
        per_statement[sid] = {
            n: stats.ndcg_at_n(ranking, n, gain=config.gain) for n in config.ndcg_cutoffs
        }
    if missing:
        raise _missing_error(metric, sorted(set(missing)))

    mean_ndcg: dict[int, float | None] = {}
    for n in config.ndcg_cutoffs:
        values = [values[n] for values in per_statement.values()]
        mean_ndcg[n] = macro_average(values) if values else None
    return RetrievalResult(
        mean_ndcg=mean_ndcg,
        per_statement=per_statement,
        evaluated=len(per_statement),
        excluded_zero_ideal=excluded,
        skipped_empty_pools=pools.skipped_empty,
    )


PROTOCOL_NAMES = ("correlation", "classification", "retrieval")


def evaluate_metrics(
    corpus: Corpus,
    labeled: Sequence[LabeledChunk],
    table: ScoreTable,
    metrics: Sequence[str],
    config: EvaluationConfig,
    protocols: Sequence[str] = PROTOCOL_NAMES,
) -> list[ProtocolResult]:
    """Run the selected protocols for each metric; results sorted by metric name."""
    for name in protocols:
        if name not in PROTOCOL_NAMES:
            raise ValueError(f"unknown protocol {name!r}; expected one of {PROTOCOL_NAMES}")
    pools = (
        build_retrieval_pools(corpus, labeled, config) if "retrieval" in protocols else None
    )
    fingerprint = config.fingerprint()
    results = []
    for metric in sorted(set(metrics)):
        results.append(
            ProtocolResult(
                metric=metric,
                config_fingerprint=fingerprint,
                correlation=(
                    run_correlation(labeled, table, metric, config)
                    if "correlation" in protocols
                    else None
                ),
                classification=(
                    run_classification(labeled, table, metric, config)
                    if "classification" in protocols
                    else None
                ),
                retrieval=(
                    run_retrieval(pools, table, metric, config)
                    if "retrieval" in protocols
                    else None
                ),
            )
        )
    return results
