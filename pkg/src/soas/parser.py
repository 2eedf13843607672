"""Recursive-descent parser for one statement of the query language.

Grammar (keywords are matched case-insensitively against WORD lexemes)::

    statement  := command target? filters? modifiers? | freetext
    command    := FIND | SHOW | LIST | COUNT | DESCRIBE
    target     := (Word | QuotedPhrase)+          -- stops at WHERE/WITH/LIMIT/SORT
    filters    := (WHERE | WITH) filter (AND filter)*
    filter     := Word comparator value
    comparator := "=" | "!=" | "<" | ">" | "<=" | ">=" | CONTAINS
    value      := Word | Number | QuotedPhrase
    modifiers  := (LIMIT Number)? (SORT BY Word (ASC | DESC)?)?
    freetext   := (Word | QuotedPhrase | Number)+ -- taken when the first token
                                                     is not a command keyword

A statement whose first token is not a command keyword is a bag of search
terms; inside free text, keyword words are ordinary terms.  Any token left
over after the grammar is satisfied is an error.  The machine-readable
grammar reference lives in docs/grammar.ebnf.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field

from .errors import ParseError
from .lexer import Token, TokenKind


class Command(enum.Enum):
    FIND = "find"
    SHOW = "show"
    LIST = "list"
    COUNT = "count"
    DESCRIBE = "describe"


class Comparator(enum.Enum):
    EQ = "="
    NE = "!="
    LT = "<"
    GT = ">"
    LE = "<="
    GE = ">="
    CONTAINS = "contains"


class SortDirection(enum.Enum):
    ASC = "asc"
    DESC = "desc"


@dataclass(frozen=True, slots=True)
class Str:
    value: str


@dataclass(frozen=True, slots=True)
class Num:
    value: int | float


Literal = Str | Num


@dataclass(frozen=True, slots=True)
class Term:
    """A search term: a bare word/number, or a quoted phrase kept verbatim."""

    text: str
    phrase: bool = False


@dataclass(frozen=True, slots=True)
class FilterExpr:
    field: str
    comparator: Comparator
    value: Literal


@dataclass(frozen=True, slots=True)
class SortSpec:
    field: str
    direction: SortDirection


@dataclass(frozen=True, slots=True)
class Structured:
    command: Command
    target_terms: tuple[Term, ...] = ()
    filters: tuple[FilterExpr, ...] = ()
    limit: int | None = None
    sort: SortSpec | None = None


@dataclass(frozen=True, slots=True)
class FreeText:
    terms: tuple[Term, ...] = ()


Statement = Structured | FreeText

_COMMANDS = {c.value: c for c in Command}
_COMPARATOR_SYMBOLS = {c.value: c for c in Comparator if c is not Comparator.CONTAINS}
_TARGET_STOP = {"where", "with", "limit", "sort"}
_TERM_KINDS = (TokenKind.WORD, TokenKind.QUOTED_PHRASE, TokenKind.NUMBER)


def parse_number(lexeme: str) -> int | float:
    """Exact value of a NUMBER lexeme: int without a dot, float with one."""
    return float(lexeme) if "." in lexeme else int(lexeme)


class _Cursor:
    def __init__(self, tokens: list[Token]):
        self.tokens = tokens
        self.pos = 0

    def peek(self) -> Token | None:
        return self.tokens[self.pos] if self.pos < len(self.tokens) else None

    def advance(self) -> Token:
        tok = self.tokens[self.pos]
        self.pos += 1
        return tok

    def at_keyword(self, *words: str) -> bool:
        tok = self.peek()
        return (
            tok is not None
            and tok.kind is TokenKind.WORD
            and tok.lexeme.lower() in words
        )

    @property
    def end_offset(self) -> int:
        return self.tokens[-1].end

    def error_offset(self) -> int:
        """Offset of the current token, or end of input when exhausted."""
        tok = self.peek()
        return tok.start if tok is not None else self.end_offset


def parse_statement(tokens: list[Token]) -> Statement:
    """Parse one statement's tokens (non-empty, free of ``;``) into an AST.

    Raises :class:`ParseError` with the offending character offset when the
    tokens do not fit the grammar.
    """
    if not tokens:
        raise ParseError("expected a statement", 0)
    cur = _Cursor(tokens)
    first = tokens[0]
    if first.kind is TokenKind.WORD and first.lexeme.lower() in _COMMANDS:
        return _parse_structured(cur)
    return _parse_freetext(cur)


def _parse_structured(cur: _Cursor) -> Structured:
    command = _COMMANDS[cur.advance().lexeme.lower()]

    target: list[Term] = []
    while True:
        tok = cur.peek()
        if tok is None:
            break
        if tok.kind is TokenKind.QUOTED_PHRASE:
            target.append(Term(tok.lexeme, phrase=True))
        elif tok.kind is TokenKind.WORD and tok.lexeme.lower() not in _TARGET_STOP:
            target.append(Term(tok.lexeme))
        else:
            break
        cur.advance()

    filters: list[FilterExpr] = []
    if cur.at_keyword("where", "with"):
        keyword = cur.advance().lexeme.upper()
        filters.append(_parse_filter(cur, keyword))
        while cur.at_keyword("and"):
            cur.advance()
            filters.append(_parse_filter(cur, "AND"))

    limit: int | None = None
    if cur.at_keyword("limit"):
        cur.advance()
        tok = cur.peek()
        if tok is None or tok.kind is not TokenKind.NUMBER:
            raise ParseError("expected number after LIMIT", cur.error_offset())
        if "." in tok.lexeme or int(tok.lexeme) < 1:
            raise ParseError("expected positive integer after LIMIT", tok.start)
        limit = int(tok.lexeme)
        cur.advance()

    sort: SortSpec | None = None
    if cur.at_keyword("sort"):
        cur.advance()
        if not cur.at_keyword("by"):
            raise ParseError("expected BY after SORT", cur.error_offset())
        cur.advance()
        tok = cur.peek()
        if tok is None or tok.kind is not TokenKind.WORD:
            raise ParseError("expected field after SORT BY", cur.error_offset())
        cur.advance()
        direction = SortDirection.ASC
        if cur.at_keyword("asc", "desc"):
            direction = SortDirection[cur.advance().lexeme.upper()]
        sort = SortSpec(tok.lexeme, direction)

    if cur.peek() is not None:
        raise ParseError("expected end of statement", cur.error_offset())
    if command is not Command.COUNT and not target and not filters:
        offset = cur.tokens[1].start if len(cur.tokens) > 1 else cur.end_offset
        raise ParseError("expected target terms or filters", offset)
    return Structured(command, tuple(target), tuple(filters), limit, sort)


def _parse_filter(cur: _Cursor, after: str) -> FilterExpr:
    tok = cur.peek()
    if tok is None or tok.kind is not TokenKind.WORD:
        raise ParseError(f"expected filter after {after}", cur.error_offset())
    field_name = cur.advance().lexeme

    tok = cur.peek()
    if tok is not None and tok.kind is TokenKind.SYMBOL and tok.lexeme in _COMPARATOR_SYMBOLS:
        comparator = _COMPARATOR_SYMBOLS[cur.advance().lexeme]
    elif tok is not None and tok.kind is TokenKind.WORD and tok.lexeme.lower() == "contains":
        comparator = Comparator.CONTAINS
        cur.advance()
    else:
        raise ParseError("expected comparator after filter field", cur.error_offset())

    tok = cur.peek()
    if tok is None or tok.kind not in _TERM_KINDS:
        raise ParseError("expected value after comparator", cur.error_offset())
    cur.advance()
    if tok.kind is TokenKind.NUMBER:
        if comparator is Comparator.CONTAINS:
            raise ParseError("expected string value after CONTAINS", tok.start)
        value: Literal = Num(parse_number(tok.lexeme))
    else:
        value = Str(tok.lexeme)
    return FilterExpr(field_name, comparator, value)


def _parse_freetext(cur: _Cursor) -> FreeText:
    terms: list[Term] = []
    while True:
        tok = cur.peek()
        if tok is None or tok.kind not in _TERM_KINDS:
            break
        terms.append(Term(tok.lexeme, phrase=tok.kind is TokenKind.QUOTED_PHRASE))
        cur.advance()
    if not terms:
        raise ParseError("expected search terms", cur.error_offset())
    if cur.peek() is not None:
        raise ParseError("expected end of statement", cur.error_offset())
    return FreeText(tuple(terms))


def format_number(value: int | float) -> str:
    """Shortest exact text for a numeric literal (ints stay bare)."""
    return repr(value) if isinstance(value, float) else str(value)


def _is_bare_word(text: str) -> bool:
    return (
        bool(text)
        and all(c.isalpha() or c.isdecimal() for c in text)
        and any(c.isalpha() for c in text)
    )


def _render_value(value: Literal) -> str:
    if isinstance(value, Num):
        return format_number(value.value)
    return value.value if _is_bare_word(value.value) else f'"{value.value}"'


def _render_term(term: Term) -> str:
    return f'"{term.text}"' if term.phrase else term.text


def render_canonical(statement: Statement) -> str:
    """Canonical text of a statement: uppercase keywords, single spaces.

    Re-parsing the result yields a structurally identical statement (for
    parser-produced statements; hand-built string values containing a
    double quote cannot be rendered, as the language has no quote escape).
    """
    if isinstance(statement, FreeText):
        return " ".join(_render_term(t) for t in statement.terms)
    parts = [statement.command.name]
    parts.extend(_render_term(t) for t in statement.target_terms)
    for i, f in enumerate(statement.filters):
        parts.append("WHERE" if i == 0 else "AND")
        comparator = "CONTAINS" if f.comparator is Comparator.CONTAINS else f.comparator.value
        parts.append(f"{f.field} {comparator} {_render_value(f.value)}")
    if statement.limit is not None:
        parts.append(f"LIMIT {statement.limit}")
    if statement.sort is not None:
        parts.append(f"SORT BY {statement.sort.field} {statement.sort.direction.name}")
    return " ".join(parts)
