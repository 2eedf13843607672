// Orchestration between the network layer and the view, kept DOM-free so the
// submit/layout flows are directly testable.

import { ApiClient, ApiError } from "./api.js";
import { parsePrefs, serializePrefs } from "./prefs.js";
import { getSession, type StorageLike } from "./session.js";
import {
  defaultPanels,
  pushHistory,
  validatePanels,
  visibleInOrder,
  type Mode,
  type PanelConfig,
  type PanelId,
  type UiState,
} from "./state.js";
import type { ErrorView } from "./render.js";
import type { DigitalPayload, TraceResponse } from "./types.js";

export interface Banner {
  kind: "warning" | "error";
  message: string;
}

export class ConsoleController {
  state: UiState;
  payload: DigitalPayload | null = null;
  trace: TraceResponse | null = null;
  naturalPreview: string | null = null;
  lastError: ErrorView | null = null;
  lastText = "";
  banner: Banner | null = null;
  busy = false;

  constructor(
    private readonly api: ApiClient,
    storage: StorageLike,
    rand?: () => number,
  ) {
    this.state = {
      session: getSession(storage, rand),
      panels: defaultPanels(),
      mode: "digital",
      history: [],
    };
  }

  /** Load the persisted layout; any failure leaves the defaults in place. */
  async init(): Promise<void> {
    let blob: string | null;
    try {
      blob = await this.api.loadPreferences(this.state.session);
    } catch {
      this.banner = { kind: "warning", message: "could not load saved layout" };
      return;
    }
    if (blob === null) return;
    const prefs = parsePrefs(blob);
    if (prefs === null) {
      this.banner = {
        kind: "warning",
        message: "saved layout was unreadable; using defaults",
      };
      return;
    }
    this.state.panels = prefs.panels;
    this.state.mode = prefs.mode;
  }

  visiblePanels(): PanelId[] {
    return visibleInOrder(this.state.panels);
  }

  /**
   * Run one query. At most one submission is in flight; re-entrant calls
   * and empty text are rejected. Returns true when the service answered.
   */
  async submit(text: string): Promise<boolean> {
    if (this.busy || text.trim() === "") return false;
    this.busy = true;
    this.banner = null;
    this.lastError = null;
    this.lastText = text;
    this.state.history = pushHistory(this.state.history, text);
    try {
      const result = await this.api.query(text, "digital");
      this.payload = result.payload ?? null;
      try {
        this.trace = await this.api.trace(result.correlationId);
      } catch {
        this.trace = null;
        this.banner = { kind: "warning", message: "trace unavailable" };
      }
      this.naturalPreview = null;
      if (this.state.mode === "natural") {
        try {
          const natural = await this.api.query(text, "natural");
          this.naturalPreview = natural.naturalText ?? null;
        } catch {
          this.naturalPreview = null;
        }
      }
      return true;
    } catch (err) {
      this.payload = null;
      this.trace = null;
      this.naturalPreview = null;
      if (err instanceof ApiError) {
        this.lastError = {
          stage: err.body.stage,
          message: err.body.message,
          offset: err.body.offset,
        };
      } else {
        this.banner = {
          kind: "error",
          message: "network failure; service unreachable",
        };
      }
      return false;
    } finally {
      this.busy = false;
    }
  }

  /**
   * Replace the layout. The new layout takes effect locally even when
   * persisting it fails; the return value says whether it was saved.
   */
  async applyLayout(panels: PanelConfig[]): Promise<boolean> {
    const validated = validatePanels(panels);
    if (validated === null) return false;
    this.state.panels = validated;
    return await this.persist();
  }

  async setMode(mode: Mode): Promise<boolean> {
    this.state.mode = mode;
    return await this.persist();
  }

  private async persist(): Promise<boolean> {
    try {
      await this.api.savePreferences(
        this.state.session,
        serializePrefs(this.state.panels, this.state.mode),
      );
      return true;
    } catch {
      this.banner = {
        kind: "warning",
        message: "layout change kept locally; saving to the service failed",
      };
      return false;
    }
  }
}
