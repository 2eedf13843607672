// Shapes of the service's digital payload, trace payload and error body.
// These mirror the HTTP contract; the UI never invents fields of its own.

export interface Constraint {
  field: string;
  op: string;
  value: string | number;
}

export interface SortEcho {
  field: string;
  direction: "asc" | "desc";
}

export interface QueryEcho {
  subject_terms: string[];
  phrases: string[][];
  constraints: Constraint[];
  limit?: number;
  sort?: SortEcho;
}

export interface Hit {
  id: string;
  title: string;
  score: number;
  snippet: string;
}

export interface DocumentBody {
  id: string;
  title: string;
  body: string;
  meta: Record<string, string | number>;
}

export interface StatementSection {
  intent: "search" | "count" | "describe";
  query: QueryEcho;
  sql: string;
  total: number;
  hits: Hit[];
  count?: number;
  document?: DocumentBody;
}

export interface DigitalPayload {
  correlation_id: string;
  statements: StatementSection[];
}

export interface TraceEnvelope {
  seq: number;
  stage: string;
  timestamp: string;
  elapsed_micros: number;
  summary: string;
}

export interface TraceOutcome {
  status: "ok" | "failed";
  stage?: string;
  message?: string;
  offset?: number | null;
}

export interface TraceResponse {
  correlation_id: string;
  envelopes: TraceEnvelope[];
  outcome: TraceOutcome;
}

export interface ServiceError {
  stage: string;
  message: string;
  offset?: number | null;
  correlation_id: string;
}

export interface HealthInfo {
  status: string;
  documents: number;
}
