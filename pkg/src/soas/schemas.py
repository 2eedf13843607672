"""Request and response bodies for the HTTP service."""

from __future__ import annotations

from typing import Literal

from pydantic import BaseModel, ConfigDict


class QueryRequest(BaseModel):
    model_config = ConfigDict(extra="forbid")

    text: str
    mode: Literal["natural", "digital"] | None = None
    session: str | None = None


class DocumentOut(BaseModel):
    id: str
    title: str
    body: str
    meta: dict[str, object]


class IngestReport(BaseModel):
    created: int
    replaced: int


class DeleteReport(BaseModel):
    deleted: str


class ErrorBody(BaseModel):
    """Shared error shape; offset is present only when the failure points
    at a character of the request text."""

    stage: str
    message: str
    offset: int | None = None
    correlation_id: str


class EnvelopeOut(BaseModel):
    seq: int
    stage: str
    timestamp: str
    elapsed_micros: int
    summary: str


class TraceOutcomeOut(BaseModel):
    status: Literal["ok", "error"]
    stage: str | None = None
    message: str | None = None
    offset: int | None = None


class TraceOut(BaseModel):
    correlation_id: str
    envelopes: list[EnvelopeOut]
    outcome: TraceOutcomeOut


class PreferencesReport(BaseModel):
    session: str
    created: bool


class HealthOut(BaseModel):
    status: Literal["ok"]
    documents: int
