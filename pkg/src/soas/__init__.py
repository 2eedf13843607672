"""soas: a semantic search service built as a staged query pipeline.

Request text flows through six stages: tokenize, split into statements,
parse, reduce to a semantic frame, compile to an executable query, run
against the inverted-index document store, and render the response in
natural or digital mode.  Every stage is recorded on a per-request trace.
"""

__version__ = "0.1.0"
