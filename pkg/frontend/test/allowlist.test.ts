import { describe, expect, it } from "vitest";

import { API_ENDPOINTS, ApiClient } from "../src/api.js";
import { ConsoleController } from "../src/controller.js";
import { defaultPanels } from "../src/state.js";
import { FakeService, MemoryStorage, seededRand } from "./fakes.js";

function isAllowed(method: string, path: string): boolean {
  return API_ENDPOINTS.some(
    (rule) => rule.method === method && rule.pattern.test(path),
  );
}

describe("endpoint allowlist", () => {
  it("a full session touches only documented endpoints", async () => {
    const service = new FakeService();
    const api = new ApiClient("", service.fetch);
    const controller = new ConsoleController(
      api,
      new MemoryStorage(),
      seededRand(11),
    );

    await controller.init();
    await controller.submit("find pump");
    await controller.setMode("natural");
    await controller.submit("find pump seal"); // natural preview adds a query call
    const edited = defaultPanels().map((p) => ({ ...p }));
    edited.find((p) => p.panel === "tokens")!.visible = false;
    await controller.applyLayout(edited);
    await api.health();

    expect(service.requests.length).toBeGreaterThanOrEqual(8);
    for (const request of service.requests) {
      expect(
        isAllowed(request.method, request.path),
        `${request.method} ${request.path} is not a documented endpoint`,
      ).toBe(true);
    }
  });

  it("exercises every documented endpoint in that session", async () => {
    const service = new FakeService();
    const api = new ApiClient("", service.fetch);
    const controller = new ConsoleController(
      api,
      new MemoryStorage(),
      seededRand(12),
    );
    await controller.init();
    await controller.submit("find pump");
    await controller.applyLayout(defaultPanels());
    await api.health();

    for (const rule of API_ENDPOINTS) {
      expect(
        service.requests.some(
          (r) => r.method === rule.method && rule.pattern.test(r.path),
        ),
        `${rule.method} ${rule.pattern} was never called`,
      ).toBe(true);
    }
  });

  it("has no route to ingestion or document mutation", () => {
    expect(isAllowed("POST", "/api/documents")).toBe(false);
    expect(isAllowed("DELETE", "/api/documents/pump1")).toBe(false);
    expect(isAllowed("GET", "/api/documents/pump1")).toBe(false);
    expect(isAllowed("DELETE", "/api/preferences/s1")).toBe(false);
    expect(isAllowed("POST", "/api/trace/abc")).toBe(false);
  });

  it("client methods compose paths that match their own rules", async () => {
    const service = new FakeService();
    const api = new ApiClient("", service.fetch);
    const result = await api.query("find pump", "digital");
    await api.trace(result.correlationId);
    await api.savePreferences("sess_1", "{}");
    await api.loadPreferences("sess_1");
    await api.health();
    for (const request of service.requests) {
      expect(isAllowed(request.method, request.path)).toBe(true);
    }
  });
});
