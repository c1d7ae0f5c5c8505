"""Sentence-preserving document chunking and evidence-driven label propagation.

Cited documents are segmented into chunks of at most ``max_words`` words
(default 150) without ever splitting a sentence. Pair-level human judgments
are pushed down to chunk level by matching the human-extracted evidence
sentences against each chunk's sentences with the Jaccard token index.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass
from pathlib import Path

from .corpus import AnnotatedPair, Citation, SupportLevel
from .errors import ChunkFileError

# Tokens are maximal alphanumeric runs of the lowercased text. Underscore is
# punctuation here, unlike in \w.
_TOKEN_RE = re.compile(r"[^\W_]+", re.UNICODE)

# Abbreviations whose trailing period never ends a sentence.
_ABBREVIATIONS = frozenset(
    {"dr.", "mr.", "mrs.", "ms.", "prof.", "e.g.", "i.e.", "etc.", "vs."}
)

_TERMINATORS = ".!?"


def tokenize(text: str) -> list[str]:
    """Lowercase and split on maximal non-alphanumeric runs, dropping empties."""
    return _TOKEN_RE.findall(text.lower())


def word_count(text: str) -> int:
    return len(tokenize(text))


@dataclass(frozen=True)
class Chunk:
    """A sentence-aligned segment of one cited document."""

    citation_id: str
    index: int
    text: str
    word_count: int


@dataclass(frozen=True)
class LabeledChunk:
    """A chunk carrying the support label propagated from one annotated pair.

    match_score is the chunk's best evidence-sentence Jaccard (0.0 when the
    pair has no evidence).
    """

    chunk: Chunk
    statement_id: str
    label: SupportLevel
    match_score: float


def _is_sentence_boundary(text: str, after: int) -> bool:
    # `after` points just past a run of terminators. A boundary needs trailing
    # whitespace and then an uppercase continuation, a new line, or the end.
    if after >= len(text):
        return True
    if not text[after].isspace():
        return False
    k = after
    saw_newline = False
    while k < len(text) and text[k].isspace():
        saw_newline = saw_newline or text[k] == "\n"
        k += 1
    if k >= len(text):
        return True
    return saw_newline or text[k].isupper()


def _ends_with_abbreviation(text: str, after: int) -> bool:
    start = after
    while start > 0 and not text[start - 1].isspace():
        start -= 1
    word = text[start:after].lstrip("([{\"'").lower()
    return word in _ABBREVIATIONS


def split_sentences(text: str) -> list[str]:
    """Rule-based sentence segmentation.

    Splits after '.', '!', '?' when followed by whitespace and an uppercase or
    line-start continuation, except after known abbreviations. Concatenating
    the result reproduces the input up to whitespace; no sentence is empty.
    """
    sentences: list[str] = []
    n = len(text)
    start = 0
    i = 0
    while i < n:
        if text[i] in _TERMINATORS:
            j = i + 1
            while j < n and text[j] in _TERMINATORS:
                j += 1
            if _is_sentence_boundary(text, j) and not _ends_with_abbreviation(text, j):
                piece = text[start:j].strip()
                if piece:
                    sentences.append(piece)
                start = j
            i = j
        else:
            i += 1
    tail = text[start:].strip()
    if tail:
        sentences.append(tail)
    return sentences


def chunk_document(citation: Citation, max_words: int = 150) -> list[Chunk]:
    """Greedy sentence packing into chunks of at most max_words words.

    A single sentence longer than max_words becomes its own oversize chunk;
    sentences are never split. Chunk indices are dense from 0 and the chunks,
    concatenated in order, reproduce the document up to whitespace.
    """
    if max_words < 1:
        raise ValueError(f"max_words must be >= 1 (got {max_words})")
    chunks: list[Chunk] = []
    current: list[str] = []
    current_words = 0

    def flush():
        nonlocal current, current_words
        if current:
            chunks.append(
                Chunk(
                    citation_id=citation.id,
                    index=len(chunks),
                    text=" ".join(current),
                    word_count=current_words,
                )
            )
            current = []
            current_words = 0

    for sentence in split_sentences(citation.document_text):
        words = word_count(sentence)
        if words > max_words:
            flush()
            chunks.append(
                Chunk(
                    citation_id=citation.id,
                    index=len(chunks),
                    text=sentence,
                    word_count=words,
                )
            )
        elif current and current_words + words > max_words:
            flush()
            current = [sentence]
            current_words = words
        else:
            current.append(sentence)
            current_words += words
    flush()
    return chunks


def jaccard(a: str, b: str) -> float:
    """Intersection-over-union of the two token sets; 1.0 when both are empty."""
    ta = set(tokenize(a))
    tb = set(tokenize(b))
    if not ta and not tb:
        return 1.0
    return len(ta & tb) / len(ta | tb)


def propagate_labels(
    pair: AnnotatedPair, chunks: list[Chunk], threshold: float = 0.7
) -> list[LabeledChunk]:
    """Push a pair-level judgment down to chunk level via evidence matching.

    Each evidence sentence labels its best-matching chunk (max Jaccard against
    the chunk's sentences) when that match reaches the threshold; if no
    evidence sentence reaches the threshold anywhere, the single best-matching
    chunk is labeled as a fallback, guaranteeing at least one labeled chunk.
    All other chunks get NONE. NONE pairs label every chunk NONE.
    """
    if pair.judgment is SupportLevel.NONE:
        return [
            LabeledChunk(chunk=c, statement_id=pair.statement_id,
                         label=SupportLevel.NONE, match_score=0.0)
            for c in chunks
        ]
    if not chunks:
        raise ValueError(
            f"pair ({pair.statement_id}, {pair.citation_id}) has judgment "
            f"'{pair.judgment.value}' but no chunks to house its evidence"
        )

    chunk_sentences = [split_sentences(c.text) for c in chunks]
    best = [0.0] * len(chunks)
    labeled: set[int] = set()
    for evidence in pair.evidence_sentences:
        scores = [
            max((jaccard(evidence, s) for s in sentences), default=0.0)
            for sentences in chunk_sentences
        ]
        for i, score in enumerate(scores):
            if score > best[i]:
                best[i] = score
        top = max(range(len(chunks)), key=lambda i: (scores[i], -i))
        if scores[top] >= threshold:
            labeled.add(top)
    if not labeled:
        labeled = {max(range(len(chunks)), key=lambda i: (best[i], -i))}

    return [
        LabeledChunk(
            chunk=c,
            statement_id=pair.statement_id,
            label=pair.judgment if i in labeled else SupportLevel.NONE,
            match_score=best[i],
        )
        for i, c in enumerate(chunks)
    ]


def chunk_corpus(corpus, max_words: int = 150, threshold: float = 0.7) -> list[LabeledChunk]:
    """Chunk every cited document once and propagate labels for every pair."""
    chunks_by_citation: dict[str, list[Chunk]] = {}
    labeled: list[LabeledChunk] = []
    for pair in corpus.pairs:
        if pair.citation_id not in chunks_by_citation:
            chunks_by_citation[pair.citation_id] = chunk_document(
                corpus.citation(pair.citation_id), max_words=max_words
            )
        labeled.extend(
            propagate_labels(pair, chunks_by_citation[pair.citation_id], threshold=threshold)
        )
    return labeled


def save_labeled_chunks(labeled: list[LabeledChunk], path: str | Path) -> None:
    """Write the labeled-chunk dump: one JSON object per line."""
    with open(path, "w", encoding="utf-8") as f:
        for lc in labeled:
            record = {
                "citation_id": lc.chunk.citation_id,
                "index": lc.chunk.index,
                "text": lc.chunk.text,
                "word_count": lc.chunk.word_count,
                "statement_id": lc.statement_id,
                "label": lc.label.value,
                "match_score": lc.match_score,
            }
            f.write(json.dumps(record, ensure_ascii=False) + "\n")


def load_labeled_chunks(path: str | Path) -> list[LabeledChunk]:
    """Read a labeled-chunk dump written by save_labeled_chunks."""
    labeled: list[LabeledChunk] = []
    with open(path, "r", encoding="utf-8") as f:
        for line_no, line in enumerate(f, start=1):
            if not line.strip():
                continue
            try:
                record = json.loads(line)
            except json.JSONDecodeError as exc:
                raise ChunkFileError(f"line {line_no}: invalid JSON: {exc}") from None
            try:
                labeled.append(
                    LabeledChunk(
                        chunk=Chunk(
                            citation_id=record["citation_id"],
                            index=int(record["index"]),
                            text=record["text"],
                            word_count=int(record["word_count"]),
                        ),
                        statement_id=record["statement_id"],
                        label=SupportLevel(record["label"]),
                        match_score=float(record["match_score"]),
                    )
                )
            except (KeyError, TypeError, ValueError) as exc:
                raise ChunkFileError(f"line {line_no}: bad chunk record: {exc}") from None
    return labeled
