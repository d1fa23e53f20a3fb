import { describe, expect, it } from 'vitest';

import { ApiClient } from '../src/api.js';
import { LabelingSession } from '../src/session.js';
import type { RecordedCall } from './helpers.js';
import { gif, jsonResponse, scriptedFetch } from './helpers.js';

function queueBackend(ids: string[]) {
  const labeled = new Set<string>();
  return scriptedFetch([
    ['GET /api/progress', () =>
      jsonResponse({ labeled: labeled.size, assigned: ids.length })],
    ['GET /api/next', () => {
      const next = ids.find((id) => !labeled.has(id));
      return next ? jsonResponse(gif(next)) : new Response(null, { status: 204 });
    }],
    ['POST /api/label', (call: RecordedCall) => {
      const body = call.body as { gif_id: string };
      labeled.add(body.gif_id);
      return jsonResponse({ ...body, timestamp: 'now' });
    }],
  ]);
}

async function startedSession(ids: string[] = ['g0', 'g1']) {
  const backend = queueBackend(ids);
  const session = new LabelingSession(new ApiClient('', backend.fetchFn), 'a1');
  await session.start();
  return { session, ...backend };
}

describe('LabelingSession', () => {
  it('disables submit until a label is picked', async () => {
    const { session } = await startedSession();
    expect(session.snapshot().canSubmit).toBe(false);
    session.selectLabel('non_cyberbullying');
    expect(session.snapshot().canSubmit).toBe(true);
  });

  it('requires a criterion for cyberbullying (mirrors backend invariant)', async () => {
    const { session } = await startedSession();
    session.selectLabel('cyberbullying');
    expect(session.snapshot().canSubmit).toBe(false);
    expect(session.snapshot().criteriaEnabled).toBe(true);
    session.toggleCriterion('hate_speech_or_remarks');
    expect(session.snapshot().canSubmit).toBe(true);
  });

  it('ignores criteria toggles when cyberbullying is not selected', async () => {
    const { session } = await startedSession();
    session.toggleCriterion('directed_bullying');
    expect(session.snapshot().selectedCriteria).toEqual([]);
    session.selectLabel('cyberbullying');
    session.toggleCriterion('directed_bullying');
    session.selectLabel('non_cyberbullying'); // switching away clears flags
    expect(session.snapshot().selectedCriteria).toEqual([]);
  });

  it('advances the queue and counts progress on submit', async () => {
    const { session } = await startedSession(['g0', 'g1', 'g2']);
    for (const expected of ['g0', 'g1', 'g2']) {
      expect(session.snapshot().current?.id).toBe(expected);
      session.selectLabel('non_cyberbullying');
      expect(await session.submit()).toBe(true);
    }
    const state = session.snapshot();
    expect(state.finished).toBe(true);
    expect(state.current).toBeNull();
    expect(state.progress.labeled).toBe(3);
  });

  it('stops calling /api/next once the assignment is exhausted', async () => {
    const { session, calls } = await startedSession(['g0']);
    session.selectLabel('non_cyberbullying');
    await session.submit();
    expect(session.snapshot().finished).toBe(true);
    const nextCalls = calls.filter((c) => c.url.startsWith('/api/next'));
    expect(nextCalls.length).toBe(2); // initial load + the advance that saw 204
  });

  it('keyboard shortcuts produce identical requests to clicks', async () => {
    const first = await startedSession(['g0']);
    first.session.pressKey('1');
    first.session.toggleCriterion('directed_bullying');
    await first.session.submit();

    const second = await startedSession(['g0']);
    second.session.selectLabel('cyberbullying');
    second.session.toggleCriterion('directed_bullying');
    await second.session.submit();

    const post = (calls: RecordedCall[]) =>
      calls.find((c) => c.method === 'POST')?.body;
    expect(post(first.calls)).toEqual(post(second.calls));
  });

  it('every backend record traces to one submit action', async () => {
    const { session, calls } = await startedSession(['g0', 'g1']);
    session.selectLabel('non_cyberbullying');
    await session.submit();
    session.pressKey('2');
    await session.submit();
    await session.submit(); // finished: no selection, must be a no-op
    const posts = calls.filter((c) => c.method === 'POST');
    expect(posts.length).toBe(2);
  });

  it('shows 4xx inline without losing the current GIF', async () => {
    const backend = scriptedFetch([
      ['GET /api/progress', () => jsonResponse({ labeled: 0, assigned: 1 })],
      ['GET /api/next', () => jsonResponse(gif('g0'))],
      ['POST /api/label', () =>
        jsonResponse({ error: 'not_served', detail: 'not yours' }, 400)],
    ]);
    const session = new LabelingSession(new ApiClient('', backend.fetchFn), 'a1');
    await session.start();
    session.selectLabel('non_cyberbullying');
    expect(await session.submit()).toBe(false);
    const state = session.snapshot();
    expect(state.current?.id).toBe('g0');
    expect(state.error).toContain('not yours');
    expect(state.pendingRetries).toBe(0);
  });

  it('queues submissions while the backend is unreachable and retries', async () => {
    let down = true;
    const labeled = new Set<string>();
    const ids = ['g0', 'g1'];
    const backend = scriptedFetch([
      ['GET /api/progress', () => jsonResponse({ labeled: 0, assigned: 2 })],
      ['GET /api/next', () => {
        const next = ids.find((id) => !labeled.has(id));
        return next ? jsonResponse(gif(next)) : new Response(null, { status: 204 });
      }],
      ['POST /api/label', (call) => {
        if (down) throw new TypeError('fetch failed');
        const body = call.body as { gif_id: string };
        labeled.add(body.gif_id);
        return jsonResponse({ ...body, timestamp: 'now' });
      }],
    ]);
    const session = new LabelingSession(new ApiClient('', backend.fetchFn), 'a1');
    await session.start();
    session.selectLabel('non_cyberbullying');
    expect(await session.submit()).toBe(false);
    expect(session.snapshot().pendingRetries).toBe(1);
    expect(session.snapshot().current?.id).toBe('g0');

    down = false;
    expect(await session.retryPending()).toBe(1);
    const state = session.snapshot();
    expect(state.pendingRetries).toBe(0);
    expect(state.current?.id).toBe('g1'); // advanced past the queued GIF
    expect(state.progress.labeled).toBe(1);
  });
});
