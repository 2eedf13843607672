// Serialization of the persisted layout. The preference blob is owned by the
// UI; the service stores it verbatim. Anything unparseable falls back to
// defaults at load time.

import { type Mode, type PanelConfig, validatePanels } from "./state.js";

export interface StoredPrefs {
  panels: PanelConfig[];
  mode: Mode;
}

export function serializePrefs(panels: PanelConfig[], mode: Mode): string {
  return JSON.stringify({ panels, mode });
}

/** Parse a stored preference blob; null means "use defaults". */
export function parsePrefs(raw: string): StoredPrefs | null {
  let data: unknown;
  try {
    data = JSON.parse(raw);
  } catch {
    return null;
  }
  if (typeof data !== "object" || data === null) return null;
  const { panels, mode } = data as Record<string, unknown>;
  const validated = validatePanels(panels);
  if (validated === null) return null;
  if (mode !== "natural" && mode !== "digital") return null;
  return { panels: validated, mode };
}
