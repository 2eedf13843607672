// Single network seam between the console and the service. Every request the
// UI makes goes through ApiClient, and every route it may touch is listed in
// API_ENDPOINTS; the allowlist test drives the client and checks recorded
// traffic against that table.

import type {
  DigitalPayload,
  HealthInfo,
  ServiceError,
  TraceResponse,
} from "./types.js";

export type FetchLike = (
  input: string,
  init?: RequestInit,
) => Promise<Response>;

export interface EndpointRule {
  method: string;
  pattern: RegExp;
}

// The documented service surface this UI is allowed to call.
export const API_ENDPOINTS: readonly EndpointRule[] = [
  { method: "POST", pattern: /^\/api\/query$/ },
  { method: "GET", pattern: /^\/api\/trace\/[0-9a-f]{32}$/ },
  { method: "GET", pattern: /^\/api\/preferences\/[A-Za-z0-9_.-]+$/ },
  { method: "PUT", pattern: /^\/api\/preferences\/[A-Za-z0-9_.-]+$/ },
  { method: "GET", pattern: /^\/api\/health$/ },
];

export class ApiError extends Error {
  constructor(
    readonly status: number,
    readonly body: ServiceError,
  ) {
    super(body.message);
    this.name = "ApiError";
  }
}

export interface QueryResult {
  correlationId: string;
  payload?: DigitalPayload;
  naturalText?: string;
}

async function errorFrom(response: Response): Promise<ApiError> {
  let body: ServiceError;
  try {
    body = (await response.json()) as ServiceError;
  } catch {
    body = {
      stage: "Received",
      message: `HTTP ${response.status}`,
      correlation_id: "",
    };
  }
  return new ApiError(response.status, body);
}

export class ApiClient {
  constructor(
    private readonly base: string = "",
    private readonly fetchFn: FetchLike = (input, init) => fetch(input, init),
  ) {}

  private url(path: string): string {
    return this.base + path;
  }

  async query(text: string, mode: "natural" | "digital"): Promise<QueryResult> {
    const response = await this.fetchFn(this.url("/api/query"), {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify({ text, mode }),
    });
    if (!response.ok) throw await errorFrom(response);
    const correlationId = response.headers.get("X-Correlation-Id") ?? "";
    if (mode === "natural") {
      return { correlationId, naturalText: await response.text() };
    }
    const payload = (await response.json()) as DigitalPayload;
    return { correlationId: payload.correlation_id || correlationId, payload };
  }

  async trace(correlationId: string): Promise<TraceResponse> {
    const response = await this.fetchFn(
      this.url(`/api/trace/${correlationId}`),
    );
    if (!response.ok) throw await errorFrom(response);
    return (await response.json()) as TraceResponse;
  }

  /** Stored preference blob for the session, or null when none exists. */
  async loadPreferences(session: string): Promise<string | null> {
    const response = await this.fetchFn(
      this.url(`/api/preferences/${session}`),
    );
    if (response.status === 404) return null;
    if (!response.ok) throw await errorFrom(response);
    return await response.text();
  }

  async savePreferences(session: string, blob: string): Promise<void> {
    const response = await this.fetchFn(
      this.url(`/api/preferences/${session}`),
      {
        method: "PUT",
        headers: { "Content-Type": "application/octet-stream" },
        body: blob,
      },
    );
    if (!response.ok) throw await errorFrom(response);
  }

  async health(): Promise<HealthInfo> {
    const response = await this.fetchFn(this.url("/api/health"));
    if (!response.ok) throw await errorFrom(response);
    return (await response.json()) as HealthInfo;
  }
}
