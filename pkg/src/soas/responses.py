"""Build the final response from executed statements.

Hits are joined back to their full documents, the most informative
sentence of each body becomes the snippet, and the whole request is
rendered either as templated natural-language text or as the structured
digital payload (the shape published in schemas/digital_payload.schema.json).
This module only reads from the store; it never mutates it.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import UnknownDocument
from .frames import Intent, SemanticFrame, text_terms
from .parser import Comparator, Num
from .store import Document, DocumentStore, ResultSet, literal_to_plain, render_literal

SNIPPET_FALLBACK_CHARS = 120
SNIPPET_MAX_CHARS = 160
_SENTENCE_ENDERS = ".!?"

_OP_TEXT = {
    Comparator.EQ: "=",
    Comparator.NE: "!=",
    Comparator.LT: "<",
    Comparator.GT: ">",
    Comparator.LE: "<=",
    Comparator.GE: ">=",
    Comparator.CONTAINS: "contains",
}


@dataclass(frozen=True, slots=True)
class DocumentHit:
    document: Document
    score: float
    rank: int


@dataclass(frozen=True, slots=True)
class StatementSection:
    """One statement's execution bundle, ordered by priority."""

    frame: SemanticFrame
    sql: str
    result: ResultSet | int | Document


@dataclass(frozen=True, slots=True)
class ResponseEnvelope:
    correlation_id: str
    mode: str
    sections: tuple[StatementSection, ...]
    natural_text: str | None = None
    structured_payload: dict | None = None


def retrieve_hits(results: ResultSet, store: DocumentStore) -> list[DocumentHit]:
    hits = []
    for rank, (doc_id, score) in enumerate(results.hits, start=1):
        doc = store.get(doc_id)
        if doc is None:  # cannot happen within one request's read snapshot
            raise UnknownDocument(doc_id)
        hits.append(DocumentHit(doc, score, rank))
    return hits


def split_sentences(text: str) -> list[str]:
    """Sentences end at '.', '!' or '?' followed by whitespace or end of
    text; a trailing fragment with no terminator also counts."""
    sentences = []
    start = 0
    for i, ch in enumerate(text):
        if ch in _SENTENCE_ENDERS and (i + 1 == len(text) or text[i + 1].isspace()):
            segment = text[start : i + 1].strip()
            if segment:
                sentences.append(segment)
            start = i + 1
    tail = text[start:].strip()
    if tail:
        sentences.append(tail)
    return sentences


def make_snippet(doc: Document, terms: list[str]) -> str:
    """The body sentence containing the most distinct query terms (ties
    go to the earliest); with no matching sentence, the first 120
    characters of the body.  Long snippets are cut to 157 chars + "..."."""
    body = doc.body
    if not body:
        return ""
    best = None
    best_count = 0
    if terms:
        term_set = set(terms)
        for sentence in split_sentences(body):
            count = len(term_set & set(text_terms(sentence)))
            if count > best_count:
                best, best_count = sentence, count
    snippet = best if best is not None else body[:SNIPPET_FALLBACK_CHARS]
    if len(snippet) > SNIPPET_MAX_CHARS:
        snippet = snippet[: SNIPPET_MAX_CHARS - 3] + "..."
    return snippet


def render_score(score: float) -> str:
    """Three decimals, round-half-even (banker's rounding of the exact
    binary value, which is what float formatting does)."""
    return format(score, ".3f")


def snippet_terms(frame: SemanticFrame) -> list[str]:
    """Distinct subject plus phrase-group terms, in frame order."""
    out: list[str] = []
    seen: set[str] = set()
    for term in list(frame.subject_terms) + [t for g in frame.phrase_groups for t in g]:
        if term not in seen:
            seen.add(term)
            out.append(term)
    return out


def _natural_section(section: StatementSection, store: DocumentStore) -> str:
    frame = section.frame
    result = section.result
    if frame.intent is Intent.COUNT:
        return f"There are {result} matching documents."
    if frame.intent is Intent.DESCRIBE:
        assert isinstance(result, Document)
        lines = [f"Document {result.id}:", f"  title: {result.title}"]
        for name in sorted(result.meta):
            lines.append(f"  {name}: {render_literal(result.meta[name])}")
        lines.append(f"  body: {result.body[:200]}")
        return "\n".join(lines)
    assert isinstance(result, ResultSet)
    terms_text = " ".join(frame.subject_terms)
    if not result.hits:
        return f'No documents matched "{terms_text}".'
    hits = retrieve_hits(result, store)
    terms = snippet_terms(frame)
    lines = [
        f'Found {result.total_matched} document(s) for "{terms_text}". Showing {len(hits)}:'
    ]
    for hit in hits:
        doc = hit.document
        lines.append(
            f"  {hit.rank}. {doc.title} [{doc.id}] "
            f"(score {render_score(hit.score)}) — {make_snippet(doc, terms)}"
        )
    return "\n".join(lines)


def _frame_payload(frame: SemanticFrame) -> dict:
    query: dict = {
        "subject_terms": list(frame.subject_terms),
        "phrases": [list(group) for group in frame.phrase_groups],
        "constraints": [
            {
                "field": c.field,
                "op": _OP_TEXT[c.comparator],
                "value": literal_to_plain(c.value),
            }
            for c in frame.constraints
        ],
    }
    if frame.intent is Intent.SEARCH:
        query["limit"] = frame.limit
        if frame.sort is not None:
            query["sort"] = {
                "field": frame.sort.field,
                "direction": frame.sort.direction.value,
            }
    return query


def _digital_statement(section: StatementSection, store: DocumentStore) -> dict:
    frame = section.frame
    entry: dict = {
        "intent": frame.intent.value,
        "query": _frame_payload(frame),
        "sql": section.sql,
    }
    # total and hits are schema-stable across intents; count and document
    # appear only for their own intent.
    result = section.result
    if frame.intent is Intent.COUNT:
        assert isinstance(result, int)
        entry["total"] = result
        entry["hits"] = []
        entry["count"] = result
    elif frame.intent is Intent.DESCRIBE:
        assert isinstance(result, Document)
        entry["total"] = 1
        entry["hits"] = []
        entry["document"] = {
            "id": result.id,
            "title": result.title,
            "body": result.body,
            "meta": {k: literal_to_plain(v) for k, v in result.meta.items()},
        }
    else:
        assert isinstance(result, ResultSet)
        terms = snippet_terms(frame)
        entry["total"] = result.total_matched
        entry["hits"] = [
            {
                "id": hit.document.id,
                "title": hit.document.title,
                "score": hit.score,
                "snippet": make_snippet(hit.document, terms),
            }
            for hit in retrieve_hits(result, store)
        ]
    return entry


def reconstruct(
    sections: list[StatementSection],
    mode: str,
    correlation_id: str,
    store: DocumentStore,
) -> ResponseEnvelope:
    """Render executed statements in the requested mode.

    Natural mode produces the templated text; with several statements the
    sections are numbered ``1) `` onward and separated by a blank line.
    Digital mode produces the structured payload; exactly one of the two
    renderings is populated.
    """
    if mode == "natural":
        rendered = [_natural_section(s, store) for s in sections]
        if len(rendered) > 1:
            rendered = [
                f"{i + 1}) {text}" for i, text in enumerate(rendered)
            ]
        return ResponseEnvelope(
            correlation_id=correlation_id,
            mode=mode,
            sections=tuple(sections),
            natural_text="\n\n".join(rendered),
        )
    payload = {
        "correlation_id": correlation_id,
        "statements": [_digital_statement(s, store) for s in sections],
    }
    return ResponseEnvelope(
        correlation_id=correlation_id,
        mode=mode,
        sections=tuple(sections),
        structured_payload=payload,
    )
