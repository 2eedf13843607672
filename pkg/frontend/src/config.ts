// Runtime configuration. The console is a static bundle; the API base URL
// comes from an optional config.json served next to it, defaulting to
// same-origin paths.

import type { FetchLike } from "./api.js";

export interface RuntimeConfig {
  apiBase: string;
}

export async function loadRuntimeConfig(
  fetchFn: FetchLike = (input, init) => fetch(input, init),
): Promise<RuntimeConfig> {
  try {
    const response = await fetchFn("./config.json");
    if (response.ok) {
      const data: unknown = await response.json();
      if (typeof data === "object" && data !== null) {
        const base = (data as Record<string, unknown>)["apiBase"];
        if (typeof base === "string") {
          return { apiBase: base.replace(/\/+$/, "") };
        }
      }
    }
  } catch {
    // missing or unreadable config: same-origin default
  }
  return { apiBase: "" };
}
