"""citealign: meta-evaluation harness for faithfulness metrics under graded
citation support (full / partial / no support)."""

__version__ = "0.1.0"

from .corpus import (  # noqa: E402
    AnnotatedPair,
    Citation,
    Corpus,
    CountsBySupportLevel,
    Statement,
    SupportLevel,
    corpus_stats,
    load_corpus,
    save_corpus,
    validate,
)
from .chunker import (  # noqa: E402
    Chunk,
    LabeledChunk,
    chunk_corpus,
    chunk_document,
    jaccard,
    propagate_labels,
    split_sentences,
)
from .scoring import (  # noqa: E402
    MetricScore,
    ScoreTable,
    aggregate_to_citation,
    compute_baseline_scores,
    jaccard_metric,
    load_scores,
    save_scores,
    token_f1,
)
from .protocols import (  # noqa: E402
    CLASSIFICATION_SETTINGS,
    EvaluationConfig,
    ProtocolResult,
    build_retrieval_pools,
    evaluate_metrics,
    run_classification,
    run_correlation,
    run_retrieval,
)
from .report import RunManifest, export_run, load_run, render_table  # noqa: E402

__all__ = [
    "AnnotatedPair",
    "Citation",
    "Chunk",
    "CLASSIFICATION_SETTINGS",
    "Corpus",
    "CountsBySupportLevel",
    "EvaluationConfig",
    "LabeledChunk",
    "MetricScore",
    "ProtocolResult",
    "RunManifest",
    "ScoreTable",
    "Statement",
    "SupportLevel",
    "aggregate_to_citation",
    "build_retrieval_pools",
    "chunk_corpus",
    "chunk_document",
    "compute_baseline_scores",
    "corpus_stats",
    "evaluate_metrics",
    "export_run",
    "jaccard",
    "jaccard_metric",
    "load_corpus",
    "load_run",
    "load_scores",
    "propagate_labels",
    "render_table",
    "run_classification",
    "run_correlation",
    "run_retrieval",
    "save_corpus",
    "save_scores",
    "split_sentences",
    "token_f1",
    "validate",
]
