import { describe, expect, it } from "vitest";

import { ApiClient, type FetchLike } from "../src/api.js";
import { ConsoleController } from "../src/controller.js";
import { HISTORY_LIMIT } from "../src/state.js";
import { FakeService, MemoryStorage, seededRand } from "./fakes.js";

function makeController(fetchFn: FetchLike, seed = 31): ConsoleController {
  return new ConsoleController(
    new ApiClient("", fetchFn),
    new MemoryStorage(),
    seededRand(seed),
  );
}

describe("query submission", () => {
  it("populates payload, trace and history on success", async () => {
    const service = new FakeService();
    const controller = makeController(service.fetch);
    expect(await controller.submit("find pump")).toBe(true);
    expect(controller.payload?.statements[0]?.sql).toBe(
      "SELECT id, score FROM documents ORDER BY score DESC LIMIT 10",
    );
    expect(controller.trace?.envelopes.map((e) => e.stage)).toContain(
      "QueryGenerated",
    );
    expect(controller.state.history).toEqual(["find pump"]);
    expect(controller.busy).toBe(false);
    expect(controller.lastError).toBeNull();
  });

  it("requests a natural preview only in natural mode", async () => {
    const service = new FakeService();
    const controller = makeController(service.fetch);
    await controller.submit("find pump");
    expect(controller.naturalPreview).toBeNull();

    await controller.setMode("natural");
    await controller.submit("find pump");
    expect(controller.naturalPreview).toContain("find pump");
    const queryBodies = service.requests
      .filter((r) => r.path === "/api/query")
      .map((r) => JSON.parse(r.body ?? "{}") as { mode: string });
    expect(queryBodies.map((b) => b.mode)).toEqual([
      "digital",
      "digital",
      "natural",
    ]);
  });

  it("rejects empty and whitespace-only text without network traffic", async () => {
    const service = new FakeService();
    const controller = makeController(service.fetch);
    expect(await controller.submit("")).toBe(false);
    expect(await controller.submit("   ")).toBe(false);
    expect(service.requests).toHaveLength(0);
    expect(controller.state.history).toEqual([]);
  });

  it("allows only one submission in flight", async () => {
    const service = new FakeService();
    let release!: () => void;
    const gate = new Promise<void>((resolve) => {
      release = resolve;
    });
    const gatedFetch: FetchLike = async (input, init) => {
      await gate;
      return service.fetch(input, init);
    };
    const controller = makeController(gatedFetch);

    const first = controller.submit("find pump");
    expect(controller.busy).toBe(true);
    expect(await controller.submit("count")).toBe(false);
    release();
    expect(await first).toBe(true);
    expect(controller.state.history).toEqual(["find pump"]);
    expect(controller.busy).toBe(false);
  });

  it("shows a banner and clears panels on network failure", async () => {
    const failing: FetchLike = async () => {
      throw new TypeError("fetch failed");
    };
    const controller = makeController(failing, 32);
    expect(await controller.submit("find pump")).toBe(false);
    expect(controller.banner?.kind).toBe("error");
    expect(controller.payload).toBeNull();
    expect(controller.trace).toBeNull();
  });

  it("keeps results but warns when only the trace fetch fails", async () => {
    const service = new FakeService();
    const flakyTrace: FetchLike = async (input, init) => {
      if (String(input).includes("/api/trace/")) {
        throw new TypeError("fetch failed");
      }
      return service.fetch(input, init);
    };
    const controller = makeController(flakyTrace);
    expect(await controller.submit("find pump")).toBe(true);
    expect(controller.payload).not.toBeNull();
    expect(controller.trace).toBeNull();
    expect(controller.banner?.kind).toBe("warning");
  });

  it("caps history at the documented limit", async () => {
    const service = new FakeService();
    const controller = makeController(service.fetch);
    for (let i = 0; i < HISTORY_LIMIT + 5; i++) {
      await controller.submit(`find q${i}`);
    }
    expect(controller.state.history).toHaveLength(HISTORY_LIMIT);
    expect(controller.state.history[0]).toBe(`find q${HISTORY_LIMIT + 4}`);
  });

  it("records rejected submissions in history too", async () => {
    const service = new FakeService();
    service.queryErrors.set("find where", {
      stage: "Parsed",
      message: "expected filter field",
      offset: 10,
      correlation_id: "",
    });
    const controller = makeController(service.fetch);
    await controller.submit("find where");
    expect(controller.state.history).toEqual(["find where"]);
    expect(controller.lastError?.stage).toBe("Parsed");
  });
});
