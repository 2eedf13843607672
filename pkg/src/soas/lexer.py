"""Tokenizer for the controlled query language.

Tokenization rules, applied greedily left to right (maximal munch):

* a maximal run of letters and digits containing at least one letter is a
  ``WORD`` (so mixed identifiers like ``d1`` stay in one piece);
* a maximal run of decimal digits with at most one interior ``.`` is a
  ``NUMBER``;
* text between a ``"`` and the next ``"`` is a ``QUOTED_PHRASE`` whose
  lexeme excludes the quotes (no escaping: the phrase ends at the next
  quote);
* ``!=``, ``<=``, ``>=`` and the single characters ``=``, ``<``, ``>``,
  ``;`` are ``SYMBOL`` tokens;
* whitespace separates tokens; any other character is discarded.

``tokenize`` enforces the request size cap and raises on an unterminated
quote.  ``scan_text`` is the tolerant variant used when indexing document
bodies, where stray quotes and arbitrary length must not be fatal.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

from .errors import LexError

MAX_INPUT_CHARS = 8192

_TWO_CHAR_SYMBOLS = ("!=", "<=", ">=")
_ONE_CHAR_SYMBOLS = "=<>;"


class TokenKind(enum.Enum):
    WORD = "word"
    NUMBER = "number"
    QUOTED_PHRASE = "quoted_phrase"
    SYMBOL = "symbol"


@dataclass(frozen=True, slots=True)
class Token:
    """One lexical unit.  ``start``/``end`` are 0-based character offsets
    into the source; for a quoted phrase they span the quotes while the
    lexeme holds only the text between them."""

    kind: TokenKind
    lexeme: str
    start: int
    end: int


def _is_word_char(ch: str) -> bool:
    return ch.isalpha() or ch.isdecimal()


def _scan(text: str, *, strict: bool) -> list[Token]:
    tokens: list[Token] = []
    i, n = 0, len(text)
    while i < n:
        ch = text[i]
        if ch.isspace():
            i += 1
            continue
        if ch == '"':
            close = text.find('"', i + 1)
            if close < 0:
                if strict:
                    raise LexError("unterminated quote", i)
                i += 1  # tolerant mode: drop the stray quote
                continue
            tokens.append(Token(TokenKind.QUOTED_PHRASE, text[i + 1 : close], i, close + 1))
            i = close + 1
            continue
        if text[i : i + 2] in _TWO_CHAR_SYMBOLS:
            tokens.append(Token(TokenKind.SYMBOL, text[i : i + 2], i, i + 2))
            i += 2
            continue
        if ch in _ONE_CHAR_SYMBOLS:
            tokens.append(Token(TokenKind.SYMBOL, ch, i, i + 1))
            i += 1
            continue
        if _is_word_char(ch):
            j = i
            has_letter = False
            while j < n and _is_word_char(text[j]):
                if text[j].isalpha():
                    has_letter = True
                j += 1
            if has_letter:
                tokens.append(Token(TokenKind.WORD, text[i:j], i, j))
                i = j
                continue
            # All digits so far; the run may continue through one interior
            # dot, but only when a digit follows it.
            if j < n and text[j] == "." and j + 1 < n and text[j + 1].isdecimal():
                j += 1
                while j < n and text[j].isdecimal():
                    j += 1
            tokens.append(Token(TokenKind.NUMBER, text[i:j], i, j))
            i = j
            continue
        i += 1  # anything else is discarded
    return tokens


def tokenize(text: str) -> list[Token]:
    """Tokenize query text.

    Raises :class:`LexError` for input over ``MAX_INPUT_CHARS`` characters
    or for a quote with no closing quote (offset = the opening quote).
    """
    if len(text) > MAX_INPUT_CHARS:
        raise LexError(f"input exceeds {MAX_INPUT_CHARS} characters", MAX_INPUT_CHARS)
    return _scan(text, strict=True)


def scan_text(text: str) -> list[Token]:
    """Tokenize document text under the same rules, but never fail: no
    length cap, and an unmatched quote is discarded instead of raising."""
    return _scan(text, strict=False)


def split_statements(tokens: list[Token]) -> list[list[Token]]:
    """Split a token stream into statements on ``;`` symbols.

    Empty segments are dropped; the position of a segment in the returned
    list is its priority (0 = highest).
    """
    statements: list[list[Token]] = []
    current: list[Token] = []
    for tok in tokens:
        if tok.kind is TokenKind.SYMBOL and tok.lexeme == ";":
            if current:
                statements.append(current)
                current = []
        else:
            current.append(tok)
    if current:
        statements.append(current)
    return statements
