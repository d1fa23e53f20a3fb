import { describe, expect, it } from 'vitest';

import { ApiClient, ApiError } from '../src/api.js';
import { gif, jsonResponse, scriptedFetch } from './helpers.js';

describe('ApiClient', () => {
  it('returns null on 204 from /api/next', async () => {
    const { fetchFn } = scriptedFetch([
      ['GET /api/next', () => new Response(null, { status: 204 })],
    ]);
    const client = new ApiClient('', fetchFn);
    expect(await client.nextGif('a1')).toBeNull();
  });

  it('parses the GIF record from /api/next', async () => {
    const record = gif('g7');
    const { fetchFn, calls } = scriptedFetch([
      ['GET /api/next', () => jsonResponse(record)],
    ]);
    const client = new ApiClient('', fetchFn);
    expect(await client.nextGif('a1', 'round1')).toEqual(record);
    expect(calls[0].url).toBe('/api/next?annotator=a1&round=round1');
  });

  it('surfaces backend error codes as ApiError', async () => {
    const { fetchFn } = scriptedFetch([
      ['POST /api/label', () =>
        jsonResponse({ error: 'criteria_required', detail: 'pick one' }, 400)],
    ]);
    const client = new ApiClient('', fetchFn);
    const err = await client
      .submitLabel({
        gif_id: 'g',
        annotator_id: 'a',
        round: 'round1',
        label: 'cyberbullying',
        criteria_flags: [],
      })
      .catch((e) => e);
    expect(err).toBeInstanceOf(ApiError);
    expect(err.code).toBe('criteria_required');
    expect(err.isClientError).toBe(true);
  });

  it('builds media URLs with escaping', () => {
    const client = new ApiClient('http://host:9');
    expect(client.mediaUrl('g bad/id')).toBe('http://host:9/api/gif/g%20bad%2Fid/media');
  });

  it('treats 5xx as non-client errors', async () => {
    const { fetchFn } = scriptedFetch([
      ['GET /api/progress', () => new Response('boom', { status: 502 })],
    ]);
    const client = new ApiClient('', fetchFn);
    const err = await client.progress('a1').catch((e) => e);
    expect(err).toBeInstanceOf(ApiError);
    expect(err.isClientError).toBe(false);
  });
});
