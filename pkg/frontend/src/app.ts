// Browser entry point: binds the controller and renderers to the page.
// All logic lives in controller.ts/render.ts; this file only moves strings
// into the DOM and DOM events back into the controller.

import { ApiClient } from "./api.js";
import { loadRuntimeConfig } from "./config.js";
import { ConsoleController } from "./controller.js";
import {
  escapeHtml,
  renderError,
  renderFrame,
  renderParseTree,
  renderResults,
  renderSql,
  renderTokens,
  renderTrace,
} from "./render.js";
import type { PanelConfig, PanelId } from "./state.js";

const PANEL_TITLES: Record<PanelId, string> = {
  results: "Results",
  sql: "SQL",
  frame: "Frame",
  parse_tree: "Parse tree",
  tokens: "Tokens",
  trace: "Trace",
};

function panelBody(controller: ConsoleController, panel: PanelId): string {
  switch (panel) {
    case "results":
      return renderResults(controller.payload, controller.naturalPreview);
    case "sql":
      return renderSql(controller.payload);
    case "frame":
      return renderFrame(controller.payload);
    case "parse_tree":
      return renderParseTree(controller.payload, controller.trace);
    case "tokens":
      return renderTokens(controller.trace);
    case "trace":
      return renderTrace(controller.trace);
  }
}

function byOrder(panels: PanelConfig[]): PanelConfig[] {
  return [...panels].sort((a, b) => a.order - b.order);
}

export async function boot(root: HTMLElement): Promise<void> {
  const config = await loadRuntimeConfig();
  const api = new ApiClient(config.apiBase);
  const controller = new ConsoleController(api, window.localStorage);
  await controller.init();

  root.innerHTML = `
    <header>
      <h1>soas console</h1>
      <span id="health" class="health"></span>
    </header>
    <form id="query-form">
      <input id="query-input" type="text" autocomplete="off"
             placeholder='find pump seal where year >= 2008 limit 5' />
      <button id="query-submit" type="submit">Run</button>
      <label class="mode-toggle">
        <input id="mode-toggle" type="checkbox" /> natural preview
      </label>
    </form>
    <div id="banner" hidden></div>
    <div id="error" hidden></div>
    <main id="panels"></main>
    <aside>
      <section id="layout-editor"><h2>Panels</h2><ul id="layout-list"></ul></section>
      <section id="history"><h2>History</h2><ul id="history-list"></ul></section>
    </aside>
  `;

  const input = root.querySelector<HTMLInputElement>("#query-input")!;
  const submitButton = root.querySelector<HTMLButtonElement>("#query-submit")!;
  const modeToggle = root.querySelector<HTMLInputElement>("#mode-toggle")!;
  const bannerBox = root.querySelector<HTMLElement>("#banner")!;
  const errorBox = root.querySelector<HTMLElement>("#error")!;
  const panelsBox = root.querySelector<HTMLElement>("#panels")!;
  const layoutList = root.querySelector<HTMLElement>("#layout-list")!;
  const historyList = root.querySelector<HTMLElement>("#history-list")!;
  const healthBox = root.querySelector<HTMLElement>("#health")!;

  function update(): void {
    submitButton.disabled = controller.busy;
    modeToggle.checked = controller.state.mode === "natural";

    if (controller.banner !== null) {
      bannerBox.hidden = false;
      bannerBox.className = `banner ${controller.banner.kind}`;
      bannerBox.textContent = controller.banner.message;
    } else {
      bannerBox.hidden = true;
    }

    if (controller.lastError !== null) {
      errorBox.hidden = false;
      errorBox.innerHTML = renderError(controller.lastText, controller.lastError);
    } else {
      errorBox.hidden = true;
    }

    panelsBox.innerHTML = controller
      .visiblePanels()
      .map(
        (panel) =>
          `<section class="panel" data-panel="${panel}">` +
          `<h2>${PANEL_TITLES[panel]}</h2>` +
          `<div class="panel-body">${panelBody(controller, panel)}</div>` +
          `</section>`,
      )
      .join("");

    layoutList.innerHTML = byOrder(controller.state.panels)
      .map(
        (p, i) =>
          `<li data-panel="${p.panel}">` +
          `<label><input type="checkbox" data-act="toggle" ${p.visible ? "checked" : ""}/> ` +
          `${PANEL_TITLES[p.panel]}</label> ` +
          `<button data-act="up" ${i === 0 ? "disabled" : ""}>&uarr;</button>` +
          `<button data-act="down" ${i === controller.state.panels.length - 1 ? "disabled" : ""}>&darr;</button>` +
          `</li>`,
      )
      .join("");

    historyList.innerHTML = controller.state.history
      .map((text) => `<li><button data-act="recall">${escapeHtml(text)}</button></li>`)
      .join("");
  }

  root.querySelector<HTMLFormElement>("#query-form")!.addEventListener(
    "submit",
    (event) => {
      event.preventDefault();
      void controller.submit(input.value).then(update);
      update();
    },
  );

  modeToggle.addEventListener("change", () => {
    void controller
      .setMode(modeToggle.checked ? "natural" : "digital")
      .then(update);
  });

  layoutList.addEventListener("click", (event) => {
    const target = event.target as HTMLElement;
    const act = target.dataset["act"];
    const item = target.closest<HTMLElement>("li[data-panel]");
    if (!act || !item) return;
    const panelId = item.dataset["panel"] as PanelId;
    const ordered = byOrder(controller.state.panels);
    const index = ordered.findIndex((p) => p.panel === panelId);
    if (index < 0) return;
    const next = ordered.map((p) => ({ ...p }));
    if (act === "toggle") {
      next[index]!.visible = !next[index]!.visible;
    } else if (act === "up" && index > 0) {
      [next[index - 1]!.order, next[index]!.order] = [
        next[index]!.order,
        next[index - 1]!.order,
      ];
    } else if (act === "down" && index < next.length - 1) {
      [next[index + 1]!.order, next[index]!.order] = [
        next[index]!.order,
        next[index + 1]!.order,
      ];
    } else {
      return;
    }
    void controller.applyLayout(next).then(update);
    update();
  });

  historyList.addEventListener("click", (event) => {
    const target = event.target as HTMLElement;
    if (target.dataset["act"] === "recall") {
      input.value = target.textContent ?? "";
      input.focus();
    }
  });

  update();

  try {
    const health = await api.health();
    healthBox.textContent = `${health.documents} document(s)`;
  } catch {
    healthBox.textContent = "service unreachable";
  }
}

if (typeof document !== "undefined") {
  const root = document.getElementById("app");
  if (root) void boot(root);
}
