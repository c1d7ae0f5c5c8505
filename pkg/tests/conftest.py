"""Shared builders for synthetic corpora, labeled chunks, and score tables.

The synthetic corpus pairs two statements per response, one citation per
statement, three chunks per citation, and puts the pair's judgment on chunk 0
(exactly what propagation produces for verbatim evidence). This keeps the
protocol inputs realistic while staying fast at the 10k-pair scale.
"""

import random

from citealign.corpus import AnnotatedPair, Citation, Corpus, Statement, SupportLevel
from citealign.chunker import Chunk, LabeledChunk
from citealign.protocols import EvaluationConfig, build_retrieval_pools
from citealign.scoring import MetricScore, ScoreTable

TABLE1_COUNTS = (6616, 1445, 4620)  # full, partial, none


def apportion(n: int, weights=TABLE1_COUNTS) -> tuple[int, int, int]:
    """Split n into three counts proportional to weights (largest remainder)."""
    total = sum(weights)
    base = [n * w // total for w in weights]
    remainder = n - sum(base)
    by_fraction = sorted(range(3), key=lambda i: (n * weights[i]) % total, reverse=True)
    for i in by_fraction[:remainder]:
        base[i] += 1
    return tuple(base)


def build_synthetic(n_pairs: int, seed: int = 0, counts=None):
    """A corpus of n_pairs single-citation statements plus its labeled chunks."""
    if counts is None:
        counts = apportion(n_pairs)
    full, partial, none = counts
    assert full + partial + none == n_pairs
    labels = (
        [SupportLevel.FULL] * full
        + [SupportLevel.PARTIAL] * partial
        + [SupportLevel.NONE] * none
    )
    random.Random(seed).shuffle(labels)

    statements, citations, pairs, labeled = [], [], [], []
    for i, label in enumerate(labels):
        sid, cid = f"s{i:05d}", f"c{i:05d}"
        sentences = [f"Alpha item {i} recorded.", f"Bravo item {i} filed.", f"Charlie item {i} noted."]
        statements.append(Statement(sid, f"r{i // 2:05d}", f"Statement about item {i}."))
        citations.append(Citation(cid, " ".join(sentences)))
        evidence = (sentences[0],) if label is not SupportLevel.NONE else ()
        pairs.append(AnnotatedPair(sid, cid, label, evidence))
        for idx, text in enumerate(sentences):
            chunk_label = label if idx == 0 else SupportLevel.NONE
            match = 1.0 if (idx == 0 and label is not SupportLevel.NONE) else 0.0
            labeled.append(LabeledChunk(Chunk(cid, idx, text, 4), sid, chunk_label, match))
    return Corpus(statements=statements, citations=citations, pairs=pairs), labeled


def required_keys(corpus, labeled, config: EvaluationConfig):
    """Every (statement_id, citation_id, chunk_index) key the protocols will look up."""
    keys = {(lc.statement_id, lc.chunk.citation_id, lc.chunk.index) for lc in labeled}
    pools = build_retrieval_pools(corpus, labeled, config)
    for sid, entries in pools.pools.items():
        keys.update((sid, e.citation_id, e.chunk_index) for e in entries)
    return keys


def oracle_table(corpus, labeled, config: EvaluationConfig, metric: str = "oracle") -> ScoreTable:
    """Scores equal to the level value of each chunk's label for the statement."""
    level = {
        (lc.statement_id, lc.chunk.citation_id, lc.chunk.index): config.level_values[lc.label]
        for lc in labeled
    }
    none_value = config.level_values[SupportLevel.NONE]
    return ScoreTable(
        MetricScore(metric, sid, cid, idx, level.get((sid, cid, idx), none_value))
        for sid, cid, idx in required_keys(corpus, labeled, config)
    )


def random_table(corpus, labeled, config: EvaluationConfig, seed: int, metric: str = "null") -> ScoreTable:
    """Seeded uniform-random scores for every required key."""
    rng = random.Random(seed)
    return ScoreTable(
        MetricScore(metric, sid, cid, idx, rng.random())
        for sid, cid, idx in sorted(required_keys(corpus, labeled, config))
    )


def transform_table(table: ScoreTable, fn, metric_map=None) -> ScoreTable:
    """Apply fn to every score, optionally renaming metrics."""
    return ScoreTable(
        MetricScore(
            (metric_map or {}).get(s.metric, s.metric),
            s.statement_id,
            s.citation_id,
            s.chunk_index,
            fn(s.score),
        )
        for s in table.records()
    )
