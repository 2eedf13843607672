"""HTTP boundary: mode negotiation, query/ingest/trace/preferences routes.

Every response carries an `X-Correlation-Id` header.  Query requests use
the pipeline's correlation id, which stays resolvable through
`GET /api/trace/{id}` until evicted from the ring; other endpoints get a
fresh id for log correlation only.  All error bodies share one shape:
{"stage", "message", "offset"?, "correlation_id"}.
"""

from __future__ import annotations


from fastapi import FastAPI, Request, Response
from fastapi.exceptions import RequestValidationError
from fastapi.responses import JSONResponse, PlainTextResponse
from starlette.exceptions import HTTPException as StarletteHTTPException

from .errors import StorageError, UnknownDocument
from .pipeline import Pipeline, PipelineError, RawRequest, TraceRing, new_correlation_id
from .prefs import MAX_PREFS_BYTES, PreferencesStore
from .schemas import (
    DeleteReport,
    DocumentOut,
    EnvelopeOut,
    ErrorBody,
    HealthOut,
    IngestReport,
    PreferencesReport,
    QueryRequest,
    TraceOut,
    TraceOutcomeOut,
)
from .store import (
    DeleteOutcome,
    DocumentStore,
    IngestOutcome,
    literal_to_plain,
    parse_record_line,
)

DEFAULT_PORT = 7034

NDJSON_CONTENT_TYPE = "application/x-ndjson"


def _error(status: int, stage: str, message: str, correlation_id: str,
           offset: int | None = None) -> JSONResponse:
    body = ErrorBody(
        stage=stage, message=message, offset=offset, correlation_id=correlation_id
    )
    return JSONResponse(
        status_code=status,
        content=body.model_dump(exclude_none=True),
        headers={"X-Correlation-Id": correlation_id},
    )


def _pipeline_status(err: PipelineError) -> int:
    if isinstance(err.error, UnknownDocument):
        return 404
    if isinstance(err.error, StorageError):
        return 500
    return 400


def _mode_from_accept(accept: str | None) -> str | None:
    """First recognized media type wins; unknown types are skipped."""
    if not accept:
        return None
    for part in accept.split(","):
        media = part.split(";", 1)[0].strip().lower()
        if media == "text/plain":
            return "natural"
        if media == "application/json":
            return "digital"
    return None


def create_app(
    store: DocumentStore,
    *,
    prefs: PreferencesStore | None = None,
    trace_ring: TraceRing | None = None,
) -> FastAPI:
    app = FastAPI(title="soas", docs_url=None, redoc_url=None, openapi_url=None)
    pipeline = Pipeline(store, trace_ring=trace_ring)
    preferences = prefs if prefs is not None else PreferencesStore(store.data_dir)
    app.state.store = store
    app.state.pipeline = pipeline
    app.state.preferences = preferences

    @app.middleware("http")
    async def ensure_correlation_id(request: Request, call_next):
        response = await call_next(request)
        if "x-correlation-id" not in response.headers:
            response.headers["X-Correlation-Id"] = new_correlation_id()
        return response

    @app.exception_handler(RequestValidationError)
    async def on_validation_error(request: Request, exc: RequestValidationError):
        err = exc.errors()[0]
        loc = ".".join(str(piece) for piece in err["loc"] if piece != "body")
        if err["type"] == "missing":
            message = f"missing field '{loc}'"
        elif err["type"] == "json_invalid":
            message = "invalid JSON body"
        else:
            message = f"invalid field '{loc}': {err['msg']}"
        return _error(400, "Received", message, new_correlation_id())

    @app.exception_handler(StarletteHTTPException)
    async def on_http_error(request: Request, exc: StarletteHTTPException):
        return _error(exc.status_code, "Received", str(exc.detail), new_correlation_id())

    @app.post("/api/query")
    async def handle_query(body: QueryRequest, request: Request) -> Response:
        mode = body.mode or _mode_from_accept(request.headers.get("accept")) or "digital"
        raw = RawRequest(text=body.text, mode=mode, session=body.session)
        outcome, trace = pipeline.run(raw)
        cid = trace.correlation_id
        if isinstance(outcome, PipelineError):
            return _error(
                _pipeline_status(outcome),
                outcome.stage.value,
                outcome.message,
                cid,
                outcome.offset,
            )
        headers = {"X-Correlation-Id": cid}
        if mode == "natural":
            return PlainTextResponse(outcome.natural_text, headers=headers)
        return JSONResponse(outcome.structured_payload, headers=headers)

    @app.post("/api/documents")
    async def handle_ingest(request: Request) -> Response:
        cid = new_correlation_id()
        payload = await request.body()
        try:
            text = payload.decode("utf-8")
        except UnicodeDecodeError:
            return _error(400, "Received", "body is not valid UTF-8", cid)
        content_type = request.headers.get("content-type", "").split(";", 1)[0].strip()
        if content_type == NDJSON_CONTENT_TYPE:
            numbered = [
                (lineno, line)
                for lineno, line in enumerate(text.split("\n"), start=1)
                if line.strip()
            ]
            if not numbered:
                return _error(400, "Received", "empty batch", cid)
            docs = []
            for lineno, line in numbered:
                try:
                    docs.append(parse_record_line(line))
                except ValueError as exc:
                    return _error(400, "Received", f"line {lineno}: {exc}", cid)
        else:
            try:
                docs = [parse_record_line(text)]
            except ValueError as exc:
                return _error(400, "Received", f"line 1: {exc}", cid)
        created = replaced = 0
        try:
            for doc in docs:
                if store.ingest(doc) is IngestOutcome.CREATED:
                    created += 1
                else:
                    replaced += 1
        except StorageError as exc:
            return _error(500, "Executed", exc.message, cid)
        report = IngestReport(created=created, replaced=replaced)
        return JSONResponse(report.model_dump(), headers={"X-Correlation-Id": cid})

    @app.get("/api/documents/{doc_id}")
    async def handle_get_document(doc_id: str) -> Response:
        cid = new_correlation_id()
        doc = store.get(doc_id)
        if doc is None:
            return _error(404, "Executed", f"unknown document '{doc_id}'", cid)
        out = DocumentOut(
            id=doc.id,
            title=doc.title,
            body=doc.body,
            meta={k: literal_to_plain(v) for k, v in doc.meta.items()},
        )
        return JSONResponse(out.model_dump(), headers={"X-Correlation-Id": cid})

    @app.delete("/api/documents/{doc_id}")
    async def handle_delete_document(doc_id: str) -> Response:
        cid = new_correlation_id()
        try:
            outcome = store.delete(doc_id)
        except StorageError as exc:
            return _error(500, "Executed", exc.message, cid)
        if outcome is DeleteOutcome.NOT_FOUND:
            return _error(404, "Executed", f"unknown document '{doc_id}'", cid)
        report = DeleteReport(deleted=doc_id)
        return JSONResponse(report.model_dump(), headers={"X-Correlation-Id": cid})

    @app.get("/api/trace/{correlation_id}")
    async def handle_trace(correlation_id: str) -> Response:
        trace = pipeline.get_trace(correlation_id)
        if trace is None:
            return _error(
                404,
                "Received",
                f"unknown correlation id '{correlation_id}'",
                correlation_id,
            )
        out = TraceOut(
            correlation_id=trace.correlation_id,
            envelopes=[
                EnvelopeOut(
                    seq=e.seq,
                    stage=e.stage.value,
                    timestamp=e.timestamp.isoformat(),
                    elapsed_micros=e.elapsed_micros,
                    summary=e.summary,
                )
                for e in trace.envelopes
            ],
            outcome=TraceOutcomeOut(
                status=trace.outcome.status,
                stage=trace.outcome.stage.value if trace.outcome.stage else None,
                message=trace.outcome.message,
                offset=trace.outcome.offset,
            ),
        )
        return JSONResponse(
            out.model_dump(exclude_none=True),
            headers={"X-Correlation-Id": trace.correlation_id},
        )

    @app.put("/api/preferences/{session}")
    async def handle_put_preferences(session: str, request: Request) -> Response:
        cid = new_correlation_id()
        if not preferences.valid_session(session):
            return _error(400, "Received", f"invalid session identifier '{session}'", cid)
        payload = await request.body()
        if len(payload) > MAX_PREFS_BYTES:
            return _error(
                400,
                "Received",
                f"preferences payload exceeds {MAX_PREFS_BYTES} bytes",
                cid,
            )
        created = preferences.put(session, payload)
        report = PreferencesReport(session=session, created=created)
        return JSONResponse(
            report.model_dump(),
            status_code=201 if created else 200,
            headers={"X-Correlation-Id": cid},
        )

    @app.get("/api/preferences/{session}")
    async def handle_get_preferences(session: str) -> Response:
        cid = new_correlation_id()
        if not preferences.valid_session(session):
            return _error(400, "Received", f"invalid session identifier '{session}'", cid)
        payload = preferences.get(session)
        if payload is None:
            return _error(404, "Received", f"unknown session '{session}'", cid)
        return Response(
            content=payload,
            media_type="application/json",
            headers={"X-Correlation-Id": cid},
        )

    @app.get("/api/health")
    async def handle_health() -> Response:
        out = HealthOut(status="ok", documents=store.doc_count)
        return JSONResponse(
            out.model_dump(), headers={"X-Correlation-Id": new_correlation_id()}
        )

    return app
