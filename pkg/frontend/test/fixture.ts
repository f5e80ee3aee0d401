/** Replay a recorded service session as a fetch implementation. */
import { readFileSync } from 'node:fs';
import { dirname, join } from 'node:path';
import { fileURLToPath } from 'node:url';

import type { FetchLike } from '../src/client.js';

export interface Exchange {
  method: string;
  path: string;
  body: unknown;
  status: number;
  response: unknown;
}

const FIXTURE_PATH = join(
  dirname(fileURLToPath(import.meta.url)),
  'fixtures',
  'session.json',
);

export function loadSession(): Exchange[] {
  const raw = JSON.parse(readFileSync(FIXTURE_PATH, 'utf-8'));
  return raw.exchanges as Exchange[];
}

/** JSON with object keys sorted, so key order never affects matching. */
function canonical(value: unknown): string {
  if (Array.isArray(value)) {
    return `[${value.map(canonical).join(',')}]`;
  }
  if (value !== null && typeof value === 'object') {
    const entries = Object.entries(value as Record<string, unknown>)
      .sort(([a], [b]) => (a < b ? -1 : 1))
      .map(([k, v]) => `${JSON.stringify(k)}:${canonical(v)}`);
    return `{${entries.join(',')}}`;
  }
  return JSON.stringify(value);
}

function keyOf(method: string, path: string, body: unknown): string {
  return `${method} ${path} ${canonical(body ?? null)}`;
}

/** Serves recorded responses; repeated identical requests pop in order and
 * the last recording answers any further repeats. */
export function fixtureFetch(exchanges: Exchange[]): FetchLike {
  const queues = new Map<string, Exchange[]>();
  for (const ex of exchanges) {
    const key = keyOf(ex.method, ex.path, ex.body);
    const queue = queues.get(key) ?? [];
    queue.push(ex);
    queues.set(key, queue);
  }
  return async (url, init) => {
    const method = init?.method ?? 'GET';
    const body = init?.body ? JSON.parse(String(init.body)) : null;
    const queue = queues.get(keyOf(method, url, body));
    if (!queue || queue.length === 0) {
      throw new Error(`no recorded exchange for ${method} ${url} ${JSON.stringify(body)}`);
    }
    const ex = queue.length > 1 ? queue.shift()! : queue[0]!;
    return new Response(JSON.stringify(ex.response), {
      status: ex.status,
      headers: { 'Content-Type': 'application/json' },
    });
  };
}

export function lastOf(exchanges: Exchange[], method: string, path: string): Exchange {
  const hits = exchanges.filter((e) => e.method === method && e.path === path);
  const last = hits[hits.length - 1];
  if (!last) throw new Error(`fixture has no ${method} ${path}`);
  return last;
}
