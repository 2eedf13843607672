"""Error types shared across the pipeline stages and the store."""

from __future__ import annotations


class SoasError(Exception):
    """Base class for all errors raised by this package."""


class LexError(SoasError):
    """Tokenization failure; `offset` points at the offending character."""

    def __init__(self, message: str, offset: int):
        super().__init__(message)
        self.message = message
        self.offset = offset


class ParseError(SoasError):
    """Grammar violation; `offset` is the offending token's start, or the
    end of input when the statement ended too early."""

    def __init__(self, message: str, offset: int):
        super().__init__(message)
        self.message = message
        self.offset = offset


class EmptyQueryError(SoasError):
    """A statement reduced to nothing actionable: no terms, no phrases,
    no filters (and the intent is not a bare count)."""

    def __init__(self, message: str):
        super().__init__(message)
        self.message = message


class UnknownDocument(SoasError):
    """Lookup of a document id that is not in the store."""

    def __init__(self, doc_id: str):
        super().__init__(f"unknown document '{doc_id}'")
        self.doc_id = doc_id
        self.message = str(self)


class StorageError(SoasError):
    """I/O failure or corruption in the persistent document log."""

    def __init__(self, message: str):
        super().__init__(message)
        self.message = message
