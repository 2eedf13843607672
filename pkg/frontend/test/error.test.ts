import { describe, expect, it } from "vitest";

import { ApiClient } from "../src/api.js";
import { ConsoleController } from "../src/controller.js";
import { renderError } from "../src/render.js";
import { FakeService, MemoryStorage, seededRand } from "./fakes.js";

describe("parse error display", () => {
  it("a 400 surfaces the stage and highlights the offset character", async () => {
    const service = new FakeService();
    service.queryErrors.set("find where year", {
      stage: "Parsed",
      message: "expected comparator after filter field",
      offset: 5,
      correlation_id: "",
    });
    const controller = new ConsoleController(
      new ApiClient("", service.fetch),
      new MemoryStorage(),
      seededRand(21),
    );

    expect(await controller.submit("find where year")).toBe(false);
    expect(controller.payload).toBeNull();
    expect(controller.lastError).toEqual({
      stage: "Parsed",
      message: "expected comparator after filter field",
      offset: 5,
    });

    const html = renderError(controller.lastText, controller.lastError!);
    expect(html).toContain("<strong>Parsed</strong>");
    expect(html).toContain("expected comparator after filter field");
    // character 5 of "find where year" is the "w" of "where"
    expect(html).toContain('find <mark class="err-at">w</mark>here year');
    expect(html).toContain("offset 5");
  });

  it("marks end-of-input when the offset equals the text length", () => {
    const html = renderError("find pump and", {
      stage: "Parsed",
      message: "expected filter after AND",
      offset: 13,
    });
    expect(html).toContain('mark class="err-at err-end"');
    expect(html).toContain("offset 13");
  });

  it("renders without a highlight when no offset is reported", () => {
    const html = renderError("describe ghost", {
      stage: "Executed",
      message: "no document with id 'ghost'",
      offset: null,
    });
    expect(html).toContain("<strong>Executed</strong>");
    expect(html).not.toContain("<mark");
  });

  it("ignores an out-of-range offset rather than crashing", () => {
    const html = renderError("find", {
      stage: "Parsed",
      message: "bad",
      offset: 99,
    });
    expect(html).toContain("<strong>Parsed</strong>");
    expect(html).not.toContain("<mark");
  });

  it("escapes markup in the query text and message", () => {
    const html = renderError('find <script>alert("x")</script>', {
      stage: "Parsed",
      message: 'unexpected "<" in <input>',
      offset: 5,
    });
    expect(html).not.toContain("<script>");
    expect(html).toContain("&lt;/script&gt;");
    expect(html).toContain("&lt;input&gt;");
  });
});
