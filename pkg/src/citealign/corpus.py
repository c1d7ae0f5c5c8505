"""Data model, ingestion, and validation for statements, citations, and judgments.

The corpus file is UTF-8 JSON lines. Each line carries a ``kind`` field:

* ``statement``: ``{kind, id, response_id, text}``
* ``citation``:  ``{kind, id, document_text, source_url?}``
* ``pair``:      ``{kind, statement_id, citation_id, judgment, evidence_sentences}``

``judgment`` is one of ``"full"``, ``"partial"``, ``"none"``. Documents can be
arbitrarily long, so loading is streaming and line-oriented.
"""

from __future__ import annotations

import enum
import functools
import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Iterator

from .errors import CorpusFormatError


@functools.total_ordering
class SupportLevel(enum.Enum):
    """Three-way human judgment, totally ordered NONE < PARTIAL < FULL."""

    NONE = "none"
    PARTIAL = "partial"
    FULL = "full"

    @property
    def ordinal(self) -> int:
        """Ordinal value used for correlation analysis: NONE=0, PARTIAL=1, FULL=2."""
        return _ORDINAL[self]

    @property
    def relevance_label(self) -> int:
        """Graded relevance label for retrieval evaluation; same 0/1/2 mapping."""
        return _ORDINAL[self]

    @classmethod
    def from_string(cls, value: str) -> "SupportLevel":
        try:
            return cls(value)
        except ValueError:
            raise ValueError(
                f"invalid support level {value!r}; expected one of 'full', 'partial', 'none'"
            ) from None

    def __lt__(self, other: object):
        if not isinstance(other, SupportLevel):
            return NotImplemented
        return _ORDINAL[self] < _ORDINAL[other]


_ORDINAL = {SupportLevel.NONE: 0, SupportLevel.PARTIAL: 1, SupportLevel.FULL: 2}


@dataclass(frozen=True)
class Statement:
    """One citing unit of a generated response."""

    id: str
    response_id: str
    text: str


@dataclass(frozen=True)
class Citation:
    """A cited web document."""

    id: str
    document_text: str
    source_url: str | None = None


@dataclass(frozen=True)
class AnnotatedPair:
    """A statement-citation pair with its human judgment and evidence sentences.

    Evidence sentences are non-empty exactly when the judgment is FULL or
    PARTIAL; NONE pairs carry no evidence.
    """

    statement_id: str
    citation_id: str
    judgment: SupportLevel
    evidence_sentences: tuple[str, ...] = ()


@dataclass
class Corpus:
    """Immutable-after-load container of statements, citations, and pairs."""

    statements: list[Statement] = field(default_factory=list)
    citations: list[Citation] = field(default_factory=list)
    pairs: list[AnnotatedPair] = field(default_factory=list)

    def __post_init__(self):
        self._statements_by_id = {s.id: s for s in self.statements}
        self._citations_by_id = {c.id: c for c in self.citations}

    def statement(self, statement_id: str) -> Statement:
        return self._statements_by_id[statement_id]

    def citation(self, citation_id: str) -> Citation:
        return self._citations_by_id[citation_id]

    def has_statement(self, statement_id: str) -> bool:
        return statement_id in self._statements_by_id

    def has_citation(self, citation_id: str) -> bool:
        return citation_id in self._citations_by_id


@dataclass(frozen=True)
class Violation:
    """One invariant violation, with a locator pointing at the offending record."""

    locator: str
    message: str

    def __str__(self) -> str:
        return f"{self.locator}: {self.message}"


@dataclass
class ValidationReport:
    violations: list[Violation] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations


@dataclass(frozen=True)
class CountsBySupportLevel:
    """Pair counts per support level; total always equals len(corpus.pairs)."""

    full: int
    partial: int
    none: int

    @property
    def total(self) -> int:
        return self.full + self.partial + self.none


def validate(corpus: Corpus) -> ValidationReport:
    """Check every corpus invariant; violations are data, not exceptions."""
    report = ValidationReport()
    add = report.violations.append

    seen_statements: set[str] = set()
    for s in corpus.statements:
        loc = f"statement {s.id}"
        if s.id in seen_statements:
            add(Violation(loc, "duplicate statement id"))
        seen_statements.add(s.id)
        if not s.text:
            add(Violation(loc, "text must be non-empty"))

    seen_citations: set[str] = set()
    for c in corpus.citations:
        loc = f"citation {c.id}"
        if c.id in seen_citations:
            add(Violation(loc, "duplicate citation id"))
        seen_citations.add(c.id)
        if not c.document_text:
            add(Violation(loc, "document_text must be non-empty"))

    seen_pairs: set[tuple[str, str]] = set()
    for p in corpus.pairs:
        loc = f"pair ({p.statement_id}, {p.citation_id})"
        if p.statement_id not in seen_statements:
            add(Violation(loc, f"dangling statement_id {p.statement_id}"))
        if p.citation_id not in seen_citations:
            add(Violation(loc, f"dangling citation_id {p.citation_id}"))
        key = (p.statement_id, p.citation_id)
        if key in seen_pairs:
            add(Violation(loc, "duplicate (statement_id, citation_id) pair"))
        seen_pairs.add(key)
        if p.judgment is SupportLevel.NONE and p.evidence_sentences:
            add(Violation(loc, "judgment 'none' requires empty evidence_sentences"))
        if p.judgment is not SupportLevel.NONE and not p.evidence_sentences:
            add(
                Violation(
                    loc,
                    f"judgment '{p.judgment.value}' requires non-empty evidence_sentences",
                )
            )
    return report


def corpus_stats(corpus: Corpus) -> CountsBySupportLevel:
    """Count annotated pairs per support level."""
    counts = {level: 0 for level in SupportLevel}
    for p in corpus.pairs:
        counts[p.judgment] += 1
    return CountsBySupportLevel(
        full=counts[SupportLevel.FULL],
        partial=counts[SupportLevel.PARTIAL],
        none=counts[SupportLevel.NONE],
    )


_LEVEL_STRINGS = {"full", "partial", "none"}


def _require(record: dict, line_no: int, kind: str, name: str, typ=str):
    if name not in record:
        raise CorpusFormatError(f"line {line_no}: {kind} missing field '{name}'")
    value = record[name]
    if typ is not None and not isinstance(value, typ):
        raise CorpusFormatError(
            f"line {line_no}: {kind} field '{name}' must be {typ.__name__}"
        )
    return value


def _parse_record(record: dict, line_no: int):
    kind = record.get("kind")
    if kind == "statement":
        sid = _require(record, line_no, kind, "id")
        response_id = _require(record, line_no, kind, "response_id")
        text = _require(record, line_no, kind, "text")
        if not text:
            raise CorpusFormatError(f"line {line_no}: statement field 'text' is empty")
        return Statement(id=sid, response_id=response_id, text=text)
    if kind == "citation":
        cid = _require(record, line_no, kind, "id")
        document_text = _require(record, line_no, kind, "document_text")
        if not document_text:
            raise CorpusFormatError(
                f"line {line_no}: citation field 'document_text' is empty"
            )
        source_url = record.get("source_url")
        if source_url is not None and not isinstance(source_url, str):
            raise CorpusFormatError(
                f"line {line_no}: citation field 'source_url' must be str"
            )
        return Citation(id=cid, document_text=document_text, source_url=source_url)
    if kind == "pair":
        statement_id = _require(record, line_no, kind, "statement_id")
        citation_id = _require(record, line_no, kind, "citation_id")
        judgment = _require(record, line_no, kind, "judgment")
        if judgment not in _LEVEL_STRINGS:
            raise CorpusFormatError(
                f"line {line_no}: pair field 'judgment' must be one of "
                f"'full', 'partial', 'none' (got {judgment!r})"
            )
        evidence = _require(record, line_no, kind, "evidence_sentences", list)
        if not all(isinstance(e, str) for e in evidence):
            raise CorpusFormatError(
                f"line {line_no}: pair field 'evidence_sentences' must contain strings"
            )
        return AnnotatedPair(
            statement_id=statement_id,
            citation_id=citation_id,
            judgment=SupportLevel(judgment),
            evidence_sentences=tuple(evidence),
        )
    raise CorpusFormatError(f"line {line_no}: unknown kind {kind!r}")


def load_corpus(path: str | Path) -> Corpus:
    """Load a JSONL corpus file, enforcing every corpus invariant.

    Raises CorpusFormatError naming the offending line and field for schema
    problems, and the offending id for dangling references. The returned
    corpus always passes validate() with zero violations; ingestion order is
    preserved.
    """
    statements: list[Statement] = []
    citations: list[Citation] = []
    pairs: list[AnnotatedPair] = []
    line_of: dict[tuple[str, str], int] = {}

    with open(path, "r", encoding="utf-8") as f:
        for line_no, line in enumerate(f, start=1):
            if not line.strip():
                continue
            try:
                record = json.loads(line)
            except json.JSONDecodeError as exc:
                raise CorpusFormatError(f"line {line_no}: invalid JSON: {exc}") from None
            if not isinstance(record, dict):
                raise CorpusFormatError(f"line {line_no}: record must be a JSON object")
            parsed = _parse_record(record, line_no)
            if isinstance(parsed, Statement):
                statements.append(parsed)
                line_of[("statement", parsed.id)] = line_no
            elif isinstance(parsed, Citation):
                citations.append(parsed)
                line_of[("citation", parsed.id)] = line_no
            else:
                pairs.append(parsed)
                line_of[("pair", f"{parsed.statement_id}/{parsed.citation_id}")] = line_no

    corpus = Corpus(statements=statements, citations=citations, pairs=pairs)
    report = validate(corpus)
    if not report.ok:
        raise CorpusFormatError(
            "corpus invariant violations:\n"
            + "\n".join(f"  {v}" for v in report.violations)
        )
    return corpus


def corpus_records(corpus: Corpus) -> Iterator[dict]:
    """Yield the canonical record dicts of a corpus in ingestion order."""
    for s in corpus.statements:
        yield {"kind": "statement", "id": s.id, "response_id": s.response_id, "text": s.text}
    for c in corpus.citations:
        record = {"kind": "citation", "id": c.id, "document_text": c.document_text}
        if c.source_url is not None:
            record["source_url"] = c.source_url
        yield record
    for p in corpus.pairs:
        yield {
            "kind": "pair",
            "statement_id": p.statement_id,
            "citation_id": p.citation_id,
            "judgment": p.judgment.value,
            "evidence_sentences": list(p.evidence_sentences),
        }


def save_corpus(corpus: Corpus, path: str | Path) -> None:
    """Write the canonical JSONL serialization; load_corpus(save_corpus(x)) == x."""
    with open(path, "w", encoding="utf-8") as f:
        for record in corpus_records(corpus):
            f.write(json.dumps(record, ensure_ascii=False) + "\n")
