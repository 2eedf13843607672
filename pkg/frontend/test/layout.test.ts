import { describe, expect, it } from "vitest";

import { ApiClient } from "../src/api.js";
import { ConsoleController } from "../src/controller.js";
import { defaultPanels } from "../src/state.js";
import { FakeService, MemoryStorage, seededRand } from "./fakes.js";

function makeController(
  service: FakeService,
  storage: MemoryStorage,
  seed = 7,
): ConsoleController {
  const api = new ApiClient("", service.fetch);
  return new ConsoleController(api, storage, seededRand(seed));
}

describe("layout persistence", () => {
  it("restores a hidden and reordered layout after reload", async () => {
    const service = new FakeService();
    const storage = new MemoryStorage();

    const first = makeController(service, storage);
    await first.init();
    expect(first.visiblePanels()).toEqual([
      "results",
      "sql",
      "frame",
      "parse_tree",
      "tokens",
      "trace",
    ]);

    // hide tokens, move trace to the front
    const edited = defaultPanels().map((p) => ({ ...p }));
    edited.find((p) => p.panel === "tokens")!.visible = false;
    edited.find((p) => p.panel === "trace")!.order = 0;
    edited.find((p) => p.panel === "results")!.order = 5;
    expect(await first.applyLayout(edited)).toBe(true);
    expect(first.visiblePanels()).toEqual([
      "trace",
      "sql",
      "frame",
      "parse_tree",
      "results",
    ]);
    expect(
      service.requests.some(
        (r) => r.method === "PUT" && r.path.startsWith("/api/preferences/"),
      ),
    ).toBe(true);

    // same browser later: same storage (session id), same service state
    const second = makeController(service, storage);
    await second.init();
    expect(second.state.session).toBe(first.state.session);
    expect(second.visiblePanels()).toEqual(first.visiblePanels());
    expect(second.state.panels).toEqual(first.state.panels);
    expect(second.banner).toBeNull();
  });

  it("persists the mode toggle alongside the layout", async () => {
    const service = new FakeService();
    const storage = new MemoryStorage();
    const first = makeController(service, storage);
    await first.init();
    await first.setMode("natural");

    const second = makeController(service, storage);
    await second.init();
    expect(second.state.mode).toBe("natural");
  });

  it("falls back to defaults when nothing is stored", async () => {
    const controller = makeController(new FakeService(), new MemoryStorage());
    await controller.init();
    expect(controller.state.panels).toEqual(defaultPanels());
    expect(controller.banner).toBeNull();
  });

  it("falls back to defaults with a warning on a corrupt stored blob", async () => {
    const service = new FakeService();
    const storage = new MemoryStorage();
    const first = makeController(service, storage);
    await first.init();
    service.prefs.set(first.state.session, "{broken");

    const second = makeController(service, storage);
    await second.init();
    expect(second.state.panels).toEqual(defaultPanels());
    expect(second.banner?.kind).toBe("warning");
  });

  it("keeps the local layout and warns when saving fails", async () => {
    const service = new FakeService();
    service.failPuts = true;
    const controller = makeController(service, new MemoryStorage());
    await controller.init();

    const edited = defaultPanels().map((p) => ({ ...p }));
    edited.find((p) => p.panel === "sql")!.visible = false;
    expect(await controller.applyLayout(edited)).toBe(false);
    expect(controller.visiblePanels()).not.toContain("sql");
    expect(controller.banner?.kind).toBe("warning");
  });

  it("warns but stays usable when loading preferences fails", async () => {
    const service = new FakeService();
    service.failPrefGets = true;
    const controller = makeController(service, new MemoryStorage());
    await controller.init();
    expect(controller.state.panels).toEqual(defaultPanels());
    expect(controller.banner?.kind).toBe("warning");
  });

  it("rejects an invalid layout without touching state", async () => {
    const service = new FakeService();
    const controller = makeController(service, new MemoryStorage());
    await controller.init();
    const before = controller.state.panels;
    const broken = defaultPanels().slice(0, 4);
    expect(await controller.applyLayout(broken)).toBe(false);
    expect(controller.state.panels).toBe(before);
    expect(
      service.requests.filter((r) => r.method === "PUT"),
    ).toHaveLength(0);
  });
});
