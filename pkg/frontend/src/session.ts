// Client-side session identity. The service treats session ids as opaque;
// we generate a random one per browser and keep it in local storage.

export interface StorageLike {
  getItem(key: string): string | null;
  setItem(key: string, value: string): void;
}

const SESSION_KEY = "soas.session";
const SESSION_RE = /^[A-Za-z0-9_-]{1,64}$/;
const ALPHABET = "abcdefghijklmnopqrstuvwxyz0123456789";

export function newSessionId(rand: () => number = Math.random): string {
  let id = "ui-";
  for (let i = 0; i < 16; i++) {
    id += ALPHABET[Math.floor(rand() * ALPHABET.length)];
  }
  return id;
}

/** Reuse the stored session id if sane, otherwise mint and persist one. */
export function getSession(
  storage: StorageLike,
  rand: () => number = Math.random,
): string {
  const existing = storage.getItem(SESSION_KEY);
  if (existing !== null && SESSION_RE.test(existing)) return existing;
  const id = newSessionId(rand);
  storage.setItem(SESSION_KEY, id);
  return id;
}
