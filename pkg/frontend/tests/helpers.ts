import type { GifRecord } from '../src/types.js';

export function gif(id: string, overrides: Partial<GifRecord> = {}): GifRecord {
  return {
    id,
    source_url: `https://example/${id}.gif`,
    tag: 'testtag',
    query_label: 'non_cyberbullying',
    media_path: `gifs/ab/${id}.gif`,
    sha256: 'ab'.repeat(32),
    frame_count: 3,
    content_category: 'unknown',
    status: 'downloaded',
    ...overrides,
  };
}

export function jsonResponse(body: unknown, status = 200): Response {
  return new Response(JSON.stringify(body), {
    status,
    headers: { 'Content-Type': 'application/json' },
  });
}

export interface RecordedCall {
  url: string;
  method: string;
  body: unknown;
}

/** Scripted fetch stub: dispatches on method+path prefix, records calls. */
export function scriptedFetch(
  routes: Array<[string, (call: RecordedCall) => Response | Promise<Response>]>,
) {
  const calls: RecordedCall[] = [];
  const fetchFn = async (url: string, init?: RequestInit): Promise<Response> => {
    const call: RecordedCall = {
      url,
      method: init?.method ?? 'GET',
      body: init?.body ? JSON.parse(String(init.body)) : null,
    };
    calls.push(call);
    for (const [pattern, handler] of routes) {
      const [method, prefix] = pattern.split(' ');
      if (call.method === method && url.startsWith(prefix)) {
        return handler(call);
      }
    }
    throw new Error(`no scripted route for ${call.method} ${url}`);
  };
  return { fetchFn, calls };
}
