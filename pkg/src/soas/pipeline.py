"""Chain the pipeline stages per request and record a stage-by-stage trace.

Each request gets a 128-bit correlation id (32 lowercase hex chars).  A
completed stage appends one envelope to the trace: Received and Tokenized
once, then Parsed / FrameBuilt / QueryGenerated / Executed per statement
in priority order, then Reconstructed once.  The first failure stops the
run; the failing stage emits no envelope and is recorded in the trace
outcome instead.  Traces live in a ring of the most recent 256 requests.
"""

from __future__ import annotations

import enum
import threading
import time
import uuid
from collections import OrderedDict
from dataclasses import dataclass, field
from datetime import datetime, timezone

from .errors import (
    EmptyQueryError,
    LexError,
    ParseError,
    SoasError,
    StorageError,
    UnknownDocument,
)
from .frames import DEFAULT_STOPWORDS, Intent, build_frame
from .lexer import MAX_INPUT_CHARS, split_statements, tokenize
from .parser import FreeText, parse_statement
from .plan import generate, render_sql
from .responses import ResponseEnvelope, StatementSection, reconstruct
from .store import Document, DocumentStore, ResultSet

TRACE_RING_CAPACITY = 256


class Stage(enum.Enum):
    RECEIVED = "Received"
    TOKENIZED = "Tokenized"
    PARSED = "Parsed"
    FRAME_BUILT = "FrameBuilt"
    QUERY_GENERATED = "QueryGenerated"
    EXECUTED = "Executed"
    RECONSTRUCTED = "Reconstructed"


@dataclass(frozen=True, slots=True)
class RawRequest:
    text: str
    mode: str = "unspecified"  # natural | digital | unspecified
    session: str | None = None
    received_at: datetime = field(
        default_factory=lambda: datetime.now(timezone.utc)
    )


@dataclass(frozen=True, slots=True)
class AgentEnvelope:
    correlation_id: str
    seq: int
    stage: Stage
    timestamp: datetime
    elapsed_micros: int
    summary: str


@dataclass(frozen=True, slots=True)
class TraceOutcome:
    status: str  # ok | error
    stage: Stage | None = None
    message: str | None = None
    offset: int | None = None


@dataclass(frozen=True, slots=True)
class PipelineTrace:
    correlation_id: str
    envelopes: tuple[AgentEnvelope, ...]
    outcome: TraceOutcome


class PipelineError(SoasError):
    """A stage failure, carrying the origin stage and, when the failure
    points at the request text, a character offset."""

    def __init__(self, stage: Stage, message: str, offset: int | None, error: SoasError):
        super().__init__(message)
        self.stage = stage
        self.message = message
        self.offset = offset
        self.error = error


class TraceRing:
    """Bounded insert-ordered trace storage; oldest evicted beyond capacity."""

    def __init__(self, capacity: int = TRACE_RING_CAPACITY):
        self.capacity = capacity
        self._traces: OrderedDict[str, PipelineTrace] = OrderedDict()
        self._lock = threading.Lock()

    def put(self, trace: PipelineTrace) -> None:
        with self._lock:
            self._traces[trace.correlation_id] = trace
            while len(self._traces) > self.capacity:
                self._traces.popitem(last=False)

    def get(self, correlation_id: str) -> PipelineTrace | None:
        with self._lock:
            return self._traces.get(correlation_id)

    def __len__(self) -> int:
        with self._lock:
            return len(self._traces)


def new_correlation_id() -> str:
    return uuid.uuid4().hex


class Pipeline:
    def __init__(
        self,
        store: DocumentStore,
        *,
        trace_ring: TraceRing | None = None,
        stopwords: frozenset[str] = DEFAULT_STOPWORDS,
    ):
        self.store = store
        self.traces = trace_ring if trace_ring is not None else TraceRing()
        self.stopwords = stopwords

    def run(
        self, request: RawRequest, *, correlation_id: str | None = None
    ) -> tuple[ResponseEnvelope | PipelineError, PipelineTrace]:
        """Run the full pipeline for one request.

        Returns the response envelope and its trace; on failure, returns
        the PipelineError in place of the envelope (the partial trace
        records the failing stage, message and offset).  ``correlation_id``
        can be injected for deterministic tests.
        """
        cid = correlation_id if correlation_id is not None else new_correlation_id()
        mode = request.mode if request.mode in ("natural", "digital") else "digital"
        envelopes: list[AgentEnvelope] = []
        stage_started = time.perf_counter()

        def emit(stage: Stage, summary: str) -> None:
            nonlocal stage_started
            now = time.perf_counter()
            envelopes.append(
                AgentEnvelope(
                    correlation_id=cid,
                    seq=len(envelopes),
                    stage=stage,
                    timestamp=datetime.now(timezone.utc),
                    elapsed_micros=int((now - stage_started) * 1_000_000),
                    summary=summary,
                )
            )
            stage_started = now

        def fail(
            stage: Stage, error: SoasError, offset: int | None
        ) -> tuple[PipelineError, PipelineTrace]:
            message = getattr(error, "message", str(error))
            trace = PipelineTrace(
                cid,
                tuple(envelopes),
                TraceOutcome("error", stage, message, offset),
            )
            self.traces.put(trace)
            return PipelineError(stage, message, offset, error), trace

        text = request.text
        emit(Stage.RECEIVED, f"mode={mode}, {len(text)} chars")
        if len(text) > MAX_INPUT_CHARS:
            err = LexError(f"input exceeds {MAX_INPUT_CHARS} characters", MAX_INPUT_CHARS)
            return fail(Stage.RECEIVED, err, err.offset)

        try:
            tokens = tokenize(text)
        except LexError as exc:
            return fail(Stage.TOKENIZED, exc, exc.offset)
        statements = split_statements(tokens)
        if not statements:
            return fail(Stage.TOKENIZED, EmptyQueryError("empty query"), None)
        emit(Stage.TOKENIZED, f"{len(tokens)} tokens, {len(statements)} statement(s)")

        sections: list[StatementSection] = []
        for priority, stmt_tokens in enumerate(statements):
            source_text = text[stmt_tokens[0].start : stmt_tokens[-1].end]
            try:
                statement = parse_statement(stmt_tokens)
            except ParseError as exc:
                return fail(Stage.PARSED, exc, exc.offset)
            kind = (
                "free-text"
                if isinstance(statement, FreeText)
                else statement.command.name
            )
            emit(Stage.PARSED, f"statement {priority}: {kind}")

            try:
                frame = build_frame(
                    statement,
                    priority,
                    source_text=source_text,
                    stopwords=self.stopwords,
                )
            except EmptyQueryError as exc:
                return fail(Stage.FRAME_BUILT, exc, None)
            emit(
                Stage.FRAME_BUILT,
                f"intent={frame.intent.value}, {len(frame.subject_terms)} term(s), "
                f"{len(frame.phrase_groups)} phrase(s), {len(frame.constraints)} filter(s)",
            )

            query = generate(frame)
            sql = render_sql(query)
            emit(Stage.QUERY_GENERATED, sql)

            try:
                result = self.store.execute(query)
            except UnknownDocument as exc:
                return fail(Stage.EXECUTED, exc, None)
            except StorageError as exc:
                return fail(Stage.EXECUTED, exc, None)
            emit(Stage.EXECUTED, _result_summary(result))
            sections.append(StatementSection(frame, sql, result))

        envelope = reconstruct(sections, mode, cid, self.store)
        if envelope.natural_text is not None:
            emit(Stage.RECONSTRUCTED, f"mode={mode}, {len(envelope.natural_text)} chars")
        else:
            emit(
                Stage.RECONSTRUCTED,
                f"mode={mode}, {len(envelope.structured_payload['statements'])} section(s)",
            )
        trace = PipelineTrace(cid, tuple(envelopes), TraceOutcome("ok"))
        self.traces.put(trace)
        return envelope, trace

    def get_trace(self, correlation_id: str) -> PipelineTrace | None:
        return self.traces.get(correlation_id)


def _result_summary(result) -> str:
    if isinstance(result, ResultSet):
        return f"{len(result.hits)} hit(s) of {result.total_matched} matched"
    if isinstance(result, Document):
        return f"document {result.id}"
    return f"count={result}"
