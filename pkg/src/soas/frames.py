"""Reduce a parsed statement to a semantic frame.

The frame is the meaning-level form of one statement: an intent, the
normalized search terms with stopwords removed, quoted phrases kept as
verbatim word groups, the filter constraints, and the result-size policy.
Everything downstream (query compilation, execution, response rendering)
works from frames, never from raw statements.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

from .errors import EmptyQueryError
from .lexer import TokenKind, scan_text
from .parser import FilterExpr, FreeText, SortSpec, Statement, Structured, Command

DEFAULT_LIMIT = 10

# Fixed stopword set, filtered from subject terms only; words inside a
# quoted phrase are kept because a quoted phrase is verbatim intent.
# "show" is absent on purpose: it is a command keyword.
# Shipped verbatim in config/stopwords.txt.
DEFAULT_STOPWORDS = frozenset(
    """
    a an the about of in on for to with and or is are was were be been
    me my all any please that this these those it its at by from as do
    does did
    """.split()
)


class Intent(enum.Enum):
    SEARCH = "search"
    COUNT = "count"
    DESCRIBE = "describe"


_COMMAND_INTENTS = {
    Command.FIND: Intent.SEARCH,
    Command.SHOW: Intent.SEARCH,
    Command.LIST: Intent.SEARCH,
    Command.COUNT: Intent.COUNT,
    Command.DESCRIBE: Intent.DESCRIBE,
}


@dataclass(frozen=True, slots=True)
class SemanticFrame:
    intent: Intent
    subject_terms: tuple[str, ...]
    phrase_groups: tuple[tuple[str, ...], ...]
    constraints: tuple[FilterExpr, ...]
    limit: int
    sort: SortSpec | None
    priority: int
    source_text: str


def normalize_term(lexeme: str) -> str:
    """Unicode default case folding; no stemming, no accent stripping."""
    return lexeme.casefold()


def load_stopwords(path) -> frozenset[str]:
    """Read a stopword file: one word per line, used verbatim."""
    with open(path, encoding="utf-8") as fh:
        return frozenset(line.strip() for line in fh if line.strip())


def text_terms(text: str) -> list[str]:
    """Normalized terms of arbitrary document text, in order.

    Words and numbers contribute their lexemes; a quoted phrase
    contributes its whitespace-split words; symbols contribute nothing.
    This is the single definition used by the indexer and by snippet
    matching, so query terms and document terms always agree.
    """
    terms: list[str] = []
    for tok in scan_text(text):
        if tok.kind is TokenKind.SYMBOL:
            continue
        if tok.kind is TokenKind.QUOTED_PHRASE:
            terms.extend(normalize_term(word) for word in tok.lexeme.split())
        else:
            terms.append(normalize_term(tok.lexeme))
    return terms


def build_frame(
    statement: Statement,
    priority: int,
    *,
    source_text: str = "",
    stopwords: frozenset[str] = DEFAULT_STOPWORDS,
) -> SemanticFrame:
    """Distill a statement into a :class:`SemanticFrame`.

    Subject terms are normalized, purged of stopwords, and deduplicated
    keeping first occurrence.  Each quoted phrase becomes one phrase group
    of its whitespace-split normalized words (stopwords retained).  Filter
    field names are normalized; filter values pass through verbatim.  The
    default limit applies when the statement names none.

    Raises :class:`EmptyQueryError` when nothing actionable remains and
    the intent is not COUNT, or when a DESCRIBE is malformed (it needs
    exactly one subject term and no filters).
    """
    if isinstance(statement, FreeText):
        intent = Intent.SEARCH
        terms = statement.terms
        limit = None
        sort = None
        constraints: tuple[FilterExpr, ...] = ()
    else:
        intent = _COMMAND_INTENTS[statement.command]
        terms = statement.target_terms
        limit = statement.limit
        sort = statement.sort
        constraints = statement.filters

    subject: list[str] = []
    seen: set[str] = set()
    groups: list[tuple[str, ...]] = []
    for term in terms:
        if term.phrase:
            groups.append(tuple(normalize_term(w) for w in term.text.split()))
            continue
        normalized = normalize_term(term.text)
        if normalized in stopwords or normalized in seen:
            continue
        seen.add(normalized)
        subject.append(normalized)

    normalized_constraints = tuple(
        FilterExpr(normalize_term(c.field), c.comparator, c.value) for c in constraints
    )
    normalized_sort = (
        SortSpec(normalize_term(sort.field), sort.direction) if sort is not None else None
    )

    if intent is Intent.DESCRIBE:
        if len(subject) != 1 or normalized_constraints:
            raise EmptyQueryError(
                "describe requires exactly one document id and no filters"
            )
    elif intent is not Intent.COUNT and not subject and not groups and not normalized_constraints:
        raise EmptyQueryError("query has no search terms, phrases, or filters")

    return SemanticFrame(
        intent=intent,
        subject_terms=tuple(subject),
        phrase_groups=tuple(groups),
        constraints=normalized_constraints,
        limit=limit if limit is not None else DEFAULT_LIMIT,
        sort=normalized_sort,
        priority=priority,
        source_text=source_text,
    )
