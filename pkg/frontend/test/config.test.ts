import { describe, expect, it } from "vitest";

import type { FetchLike } from "../src/api.js";
import { loadRuntimeConfig } from "../src/config.js";

function fetchReturning(status: number, body: string): FetchLike {
  return async () =>
    new Response(body, {
      status,
      headers: { "Content-Type": "application/json" },
    });
}

describe("runtime config", () => {
  it("reads the API base from config.json", async () => {
    const config = await loadRuntimeConfig(
      fetchReturning(200, '{"apiBase": "http://127.0.0.1:7034"}'),
    );
    expect(config.apiBase).toBe("http://127.0.0.1:7034");
  });

  it("strips trailing slashes", async () => {
    const config = await loadRuntimeConfig(
      fetchReturning(200, '{"apiBase": "http://svc:9000///"}'),
    );
    expect(config.apiBase).toBe("http://svc:9000");
  });

  it("defaults to same-origin when config.json is missing", async () => {
    const config = await loadRuntimeConfig(fetchReturning(404, "not found"));
    expect(config.apiBase).toBe("");
  });

  it("defaults when the config is malformed", async () => {
    expect((await loadRuntimeConfig(fetchReturning(200, "{{"))).apiBase).toBe("");
    expect(
      (await loadRuntimeConfig(fetchReturning(200, '{"apiBase": 7}'))).apiBase,
    ).toBe("");
  });

  it("defaults when fetch itself fails", async () => {
    const failing: FetchLike = async () => {
      throw new TypeError("offline");
    };
    expect((await loadRuntimeConfig(failing)).apiBase).toBe("");
  });
});
