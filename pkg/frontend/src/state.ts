// Panel layout and per-session UI state.
//
// Invariants enforced here:
//  - every layout lists all six panels exactly once
//  - orders are non-negative integers, unique among visible panels
//  - history holds at most 50 entries, newest first

export const PANEL_IDS = [
  "results",
  "tokens",
  "parse_tree",
  "frame",
  "sql",
  "trace",
] as const;

export type PanelId = (typeof PANEL_IDS)[number];

export interface PanelConfig {
  panel: PanelId;
  visible: boolean;
  order: number;
}

export type Mode = "natural" | "digital";

export interface UiState {
  session: string;
  panels: PanelConfig[];
  mode: Mode;
  history: string[];
}

export const HISTORY_LIMIT = 50;

// Fresh sessions show every panel in this order.
export const DEFAULT_ORDER: readonly PanelId[] = [
  "results",
  "sql",
  "frame",
  "parse_tree",
  "tokens",
  "trace",
];

export function defaultPanels(): PanelConfig[] {
  return DEFAULT_ORDER.map((panel, i) => ({ panel, visible: true, order: i }));
}

function isPanelId(value: unknown): value is PanelId {
  return typeof value === "string" && (PANEL_IDS as readonly string[]).includes(value);
}

/** Validate an untrusted layout; returns a normalized copy or null. */
export function validatePanels(raw: unknown): PanelConfig[] | null {
  if (!Array.isArray(raw) || raw.length !== PANEL_IDS.length) return null;
  const seen = new Set<string>();
  const visibleOrders = new Set<number>();
  const out: PanelConfig[] = [];
  for (const entry of raw) {
    if (typeof entry !== "object" || entry === null) return null;
    const { panel, visible, order } = entry as Record<string, unknown>;
    if (!isPanelId(panel) || seen.has(panel)) return null;
    if (typeof visible !== "boolean") return null;
    if (typeof order !== "number" || !Number.isInteger(order) || order < 0) return null;
    if (visible) {
      if (visibleOrders.has(order)) return null;
      visibleOrders.add(order);
    }
    seen.add(panel);
    out.push({ panel, visible, order });
  }
  return out;
}

/** Visible panel ids, lowest order first. */
export function visibleInOrder(panels: PanelConfig[]): PanelId[] {
  return panels
    .filter((p) => p.visible)
    .sort((a, b) => a.order - b.order)
    .map((p) => p.panel);
}

/** Prepend a submitted query, trimming to the history cap. */
export function pushHistory(history: string[], text: string): string[] {
  return [text, ...history].slice(0, HISTORY_LIMIT);
}
