"""Persistent document store with an inverted index and native query
execution.

Documents live in memory, backed by an append-only NDJSON log
(``<data-dir>/documents.ndjson``).  Each line is ``{"op": "put", "id",
"title", "body", "meta"}`` or ``{"op": "del", "id"}``; replaying the log
from scratch reproduces the store state exactly (last write per id wins).
The index is maintained incrementally on every ingest/delete and can be
rebuilt from the log at any time; the two must always agree.

Ranking: a document's score for a query is the sum over distinct query
terms of ``(2.0 * tf_title + 1.0 * tf_body) * idf``, where
``idf = ln(1 + N / (1 + df))``, ``N`` the number of live documents and
``df`` the term's document frequency (0 for unseen terms).

Concurrency: one re-entrant lock serializes writes and snapshots reads,
so concurrent readers see either the pre- or post-state of any write,
never a partial update.
"""

from __future__ import annotations

import enum
import json
import math
import os
import re
import threading
from bisect import insort
from collections import Counter
from dataclasses import dataclass, field
from pathlib import Path

from .errors import StorageError, UnknownDocument
from .frames import text_terms
from .parser import Comparator, Num, Str, format_number
from .plan import (
    And,
    Cmp,
    CountAggregate,
    FetchById,
    FieldContains,
    Filter,
    Rank,
    Scan,
    SelectHits,
    Sort,
    StructuredQuery,
)
from .parser import SortDirection

LOG_FILENAME = "documents.ndjson"
RESERVED_FIELDS = frozenset({"id", "title", "body", "score"})

_ID_RE = re.compile(r"[A-Za-z0-9_-]{1,64}\Z")
_META_FIELD_RE = re.compile(r"[a-z][a-z0-9_]*\Z")


@dataclass(frozen=True, slots=True)
class Document:
    id: str
    title: str
    body: str
    meta: dict[str, Str | Num] = field(default_factory=dict)


@dataclass(frozen=True, slots=True)
class Posting:
    doc_id: str
    tf_title: int
    tf_body: int


@dataclass(frozen=True, slots=True)
class ResultSet:
    """Ranked hits ``(doc_id, score)`` ordered by (score desc, id asc);
    ``total_matched`` counts qualifying documents before the limit."""

    hits: tuple[tuple[str, float], ...]
    total_matched: int


@dataclass(frozen=True, slots=True)
class IndexStats:
    documents: int
    terms: int
    df: dict[str, int]


class IngestOutcome(enum.Enum):
    CREATED = "created"
    REPLACED = "replaced"


class DeleteOutcome(enum.Enum):
    DELETED = "deleted"
    NOT_FOUND = "not_found"


def make_document(doc_id, title="", body="", meta=None) -> Document:
    """Validate raw record fields and build a :class:`Document`.

    Raises ValueError naming the first problem: bad id, non-string
    title/body, invalid meta field name, reserved meta field, or a meta
    value that is not a string or finite number.
    """
    if not isinstance(doc_id, str) or not _ID_RE.match(doc_id):
        raise ValueError(f"invalid document id {doc_id!r}")
    if not isinstance(title, str):
        raise ValueError("title must be a string")
    if not isinstance(body, str):
        raise ValueError("body must be a string")
    wrapped: dict[str, Str | Num] = {}
    if meta is not None:
        if not isinstance(meta, dict):
            raise ValueError("meta must be an object")
        for key, value in meta.items():
            if not isinstance(key, str) or not _META_FIELD_RE.match(key):
                raise ValueError(f"invalid meta field name {key!r}")
            if key in RESERVED_FIELDS:
                raise ValueError(f"meta field name {key!r} is reserved")
            if isinstance(value, bool):
                raise ValueError(f"meta field {key!r} must be a string or number")
            if isinstance(value, str):
                wrapped[key] = Str(value)
            elif isinstance(value, (int, float)):
                if isinstance(value, float) and not math.isfinite(value):
                    raise ValueError(f"meta field {key!r} must be finite")
                wrapped[key] = Num(value)
            else:
                raise ValueError(f"meta field {key!r} must be a string or number")
    return Document(doc_id, title, body, wrapped)


_RECORD_FIELDS = frozenset({"id", "title", "body", "meta"})


def parse_record_line(line: str) -> Document:
    """Parse one NDJSON ingest record into a validated Document.

    Raises ValueError naming the first problem so that callers can
    prefix it with a line number.
    """
    try:
        raw = json.loads(line)
    except json.JSONDecodeError as exc:
        raise ValueError(f"invalid JSON: {exc.msg}") from exc
    if not isinstance(raw, dict):
        raise ValueError("record must be an object")
    for key in raw:
        if key not in _RECORD_FIELDS:
            raise ValueError(f"unexpected field {key!r}")
    if "id" not in raw:
        raise ValueError("missing field 'id'")
    return make_document(
        raw["id"], raw.get("title", ""), raw.get("body", ""), raw.get("meta")
    )


def literal_to_plain(value: Str | Num):
    return value.value


def render_literal(value: Str | Num) -> str:
    if isinstance(value, Num):
        return format_number(value.value)
    return value.value


class InvertedIndex:
    """Map from normalized term to postings sorted by doc id."""

    def __init__(self) -> None:
        self.postings: dict[str, list[Posting]] = {}
        self.doc_count = 0

    def df(self, term: str) -> int:
        return len(self.postings.get(term, ()))

    def idf(self, term: str) -> float:
        return math.log(1 + self.doc_count / (1 + self.df(term)))

    def add_document(self, doc: Document) -> None:
        title_tf = Counter(text_terms(doc.title))
        body_tf = Counter(text_terms(doc.body))
        for term in title_tf.keys() | body_tf.keys():
            posting = Posting(doc.id, title_tf.get(term, 0), body_tf.get(term, 0))
            insort(self.postings.setdefault(term, []), posting, key=lambda p: p.doc_id)
        self.doc_count += 1

    def remove_document(self, doc: Document) -> None:
        for term in set(text_terms(doc.title)) | set(text_terms(doc.body)):
            plist = self.postings.get(term)
            if plist is None:
                continue
            self.postings[term] = [p for p in plist if p.doc_id != doc.id]
            if not self.postings[term]:
                del self.postings[term]
        self.doc_count -= 1

    def __eq__(self, other) -> bool:
        if not isinstance(other, InvertedIndex):
            return NotImplemented
        return self.doc_count == other.doc_count and self.postings == other.postings


class DocumentStore:
    def __init__(self, data_dir, *, fsync: bool = True):
        self._dir = Path(data_dir)
        self._dir.mkdir(parents=True, exist_ok=True)
        self._log_path = self._dir / LOG_FILENAME
        self._fsync = fsync
        self._lock = threading.RLock()
        self._docs: dict[str, Document] = {}
        self._index = InvertedIndex()
        self._load()
        try:
            self._log = open(self._log_path, "a", encoding="utf-8", newline="\n")
        except OSError as exc:
            raise StorageError(f"cannot open document log: {exc}") from exc

    # -- persistence ------------------------------------------------------

    def _read_log(self) -> dict[str, Document]:
        docs: dict[str, Document] = {}
        if not self._log_path.exists():
            return docs
        try:
            raw = self._log_path.read_text(encoding="utf-8")
        except OSError as exc:
            raise StorageError(f"cannot read document log: {exc}") from exc
        lines = raw.split("\n")
        # A final chunk without a newline is a torn write from a crash and
        # is dropped; a malformed line anywhere else means corruption.
        complete = lines[:-1]
        for lineno, line in enumerate(complete, start=1):
            if not line.strip():
                continue
            try:
                record = json.loads(line)
                op = record["op"]
                if op == "put":
                    doc = make_document(
                        record["id"],
                        record.get("title", ""),
                        record.get("body", ""),
                        record.get("meta"),
                    )
                    docs[doc.id] = doc
                elif op == "del":
                    docs.pop(record["id"], None)
                else:
                    raise ValueError(f"unknown op {op!r}")
            except (KeyError, ValueError, TypeError) as exc:
                raise StorageError(f"corrupt document log at line {lineno}: {exc}") from exc
        # lines[-1] is non-empty only when the file does not end in a
        # newline; that record never fully committed, so it is ignored.
        return docs

    def _load(self) -> None:
        self._docs = self._read_log()
        self._index = InvertedIndex()
        for doc in self._docs.values():
            self._index.add_document(doc)

    def _append(self, record: dict) -> None:
        line = json.dumps(record, ensure_ascii=False) + "\n"
        try:
            self._log.write(line)
            self._log.flush()
            if self._fsync:
                os.fsync(self._log.fileno())
        except OSError as exc:
            raise StorageError(f"cannot append to document log: {exc}") from exc

    def close(self) -> None:
        self._log.close()

    def __enter__(self) -> "DocumentStore":
        return self

    def __exit__(self, *exc_info) -> None:
        self.close()

    # -- mutation ---------------------------------------------------------

    def ingest(self, doc: Document) -> IngestOutcome:
        """Store a document, replacing any previous one with the same id.

        The log record is durable before memory and index are touched, so
        a failed append leaves the store unchanged.
        """
        with self._lock:
            previous = self._docs.get(doc.id)
            self._append(
                {
                    "op": "put",
                    "id": doc.id,
                    "title": doc.title,
                    "body": doc.body,
                    "meta": {k: literal_to_plain(v) for k, v in doc.meta.items()},
                }
            )
            if previous is not None:
                self._index.remove_document(previous)
            self._index.add_document(doc)
            self._docs[doc.id] = doc
            return IngestOutcome.REPLACED if previous is not None else IngestOutcome.CREATED

    def delete(self, doc_id: str) -> DeleteOutcome:
        with self._lock:
            doc = self._docs.get(doc_id)
            if doc is None:
                return DeleteOutcome.NOT_FOUND
            self._append({"op": "del", "id": doc_id})
            self._index.remove_document(doc)
            del self._docs[doc_id]
            return DeleteOutcome.DELETED

    def rebuild_index(self) -> InvertedIndex:
        """Reload documents from the log and rebuild the index from
        scratch; the result must equal the incrementally maintained one."""
        with self._lock:
            self._load()
            return self._index

    # -- read access ------------------------------------------------------

    @property
    def data_dir(self) -> Path:
        return self._dir

    @property
    def doc_count(self) -> int:
        with self._lock:
            return len(self._docs)

    def get(self, doc_id: str) -> Document | None:
        with self._lock:
            return self._docs.get(doc_id)

    def documents(self) -> dict[str, Document]:
        """Snapshot of all live documents (shallow copy, treat as read-only)."""
        with self._lock:
            return dict(self._docs)

    def index(self) -> InvertedIndex:
        return self._index

    def stats(self, terms=None) -> IndexStats:
        with self._lock:
            df = {t: self._index.df(t) for t in terms} if terms is not None else {}
            return IndexStats(len(self._docs), len(self._index.postings), df)

    # -- execution --------------------------------------------------------

    def execute(self, query: StructuredQuery):
        """Run a query plan: ResultSet for hits, int for counts, Document
        for id lookups.  Raises UnknownDocument for a missing id."""
        with self._lock:
            if isinstance(query, FetchById):
                doc = self._docs.get(query.doc_id)
                if doc is None:
                    raise UnknownDocument(query.doc_id)
                return doc
            if isinstance(query, CountAggregate):
                return sum(1 for d in self._docs.values() if _passes(d, query.source))
            return self._select(query)

    def _select(self, query: SelectHits) -> ResultSet:
        limit_op = query.source
        if isinstance(limit_op.source, Sort):
            sort_op: Sort | None = limit_op.source
            rank = sort_op.source
        else:
            sort_op = None
            rank = limit_op.source

        candidates = [d for d in self._docs.values() if _passes(d, rank.source)]

        query_terms: list[str] = []
        seen: set[str] = set()
        for term in list(rank.terms) + [t for g in rank.phrase_groups for t in g]:
            if term not in seen:
                seen.add(term)
                query_terms.append(term)

        scores: dict[str, float] = {}
        present: dict[str, set[str]] = {}
        for term in query_terms:
            idf = self._index.idf(term)
            for posting in self._index.postings.get(term, ()):
                weight = (2.0 * posting.tf_title + 1.0 * posting.tf_body) * idf
                scores[posting.doc_id] = scores.get(posting.doc_id, 0.0) + weight
                present.setdefault(posting.doc_id, set()).add(term)

        subject_set = set(rank.terms)
        matched: list[tuple[Document, float]] = []
        for doc in candidates:
            have = present.get(doc.id, frozenset())
            if rank.terms or rank.phrase_groups:
                by_terms = bool(have & subject_set)
                by_phrases = bool(rank.phrase_groups) and all(
                    all(t in have for t in group) for group in rank.phrase_groups
                )
                if not (by_terms or by_phrases):
                    continue
            matched.append((doc, scores.get(doc.id, 0.0)))

        if sort_op is not None:
            matched.sort(key=_meta_sort_key(sort_op.field, sort_op.direction))
        else:
            matched.sort(key=lambda pair: (-pair[1], pair[0].id))
        hits = tuple((doc.id, score) for doc, score in matched[: limit_op.count])
        return ResultSet(hits, len(matched))


# -- predicate and ordering helpers ---------------------------------------


def _passes(doc: Document, source: Filter | Scan) -> bool:
    if isinstance(source, Scan):
        return True
    return all(_condition_holds(doc, c) for c in source.predicate.conditions)


def _condition_holds(doc: Document, condition: Cmp | FieldContains) -> bool:
    value = doc.meta.get(condition.field)
    if value is None:
        return False
    if isinstance(condition, FieldContains):
        return condition.substring.casefold() in render_literal(value).casefold()
    target = condition.value
    if isinstance(value, Num) and isinstance(target, Num):
        a, b = value.value, target.value
    elif isinstance(value, Str) and isinstance(target, Str):
        a, b = value.value, target.value
    else:
        return False  # type mismatch is simply false, even for !=
    op = condition.comparator
    if op is Comparator.EQ:
        return a == b
    if op is Comparator.NE:
        return a != b
    if op is Comparator.LT:
        return a < b
    if op is Comparator.GT:
        return a > b
    if op is Comparator.LE:
        return a <= b
    return a >= b


def _meta_sort_key(field_name: str, direction: SortDirection):
    """Sort key for meta-field ordering: documents missing the field come
    last regardless of direction; mixed types order numbers before
    strings; ties always fall back to doc id ascending."""
    descending = direction is SortDirection.DESC

    def key(pair: tuple[Document, float]):
        doc = pair[0]
        value = doc.meta.get(field_name)
        if value is None:
            return (1, _Reversible(None, False), doc.id)
        return (0, _Reversible(value, descending), doc.id)

    return key


class _Reversible:
    """Orders wrapped literals (type rank, then value), optionally
    reversed, while keeping the surrounding tuple comparison intact."""

    __slots__ = ("rank", "value", "reverse")

    def __init__(self, literal, reverse: bool):
        if literal is None:
            self.rank, self.value = 0, 0
        elif isinstance(literal, Num):
            self.rank, self.value = 0, literal.value
        else:
            self.rank, self.value = 1, literal.value
        self.reverse = reverse

    def __lt__(self, other: "_Reversible") -> bool:
        a = (self.rank, self.value)
        b = (other.rank, other.value)
        if a == b:
            return False
        less = a < b
        return not less if self.reverse else less

    def __eq__(self, other) -> bool:
        return (self.rank, self.value) == (other.rank, other.value)
