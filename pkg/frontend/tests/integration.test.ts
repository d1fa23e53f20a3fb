/** End-to-end round trip against the real annotation service.
 *
 * Covers the release criterion: the UI submits three labels (one
 * cyberbullying with a criteria flag), adjudicates the one disagreement,
 * the backend log holds exactly four records, finalization succeeds, and a
 * scripted four-item disagreement pattern yields kappa 0.5.
 */

import { type ChildProcess, spawn } from 'node:child_process';
import { mkdtempSync, readFileSync, existsSync } from 'node:fs';
import { tmpdir } from 'node:os';
import { join, dirname } from 'node:path';
import { fileURLToPath } from 'node:url';
import { afterAll, beforeAll, describe, expect, it } from 'vitest';

import { AdjudicationQueue } from '../src/adjudication.js';
import { ApiClient } from '../src/api.js';
import { LabelingSession } from '../src/session.js';

const here = dirname(fileURLToPath(import.meta.url));
const FIXTURE = join(here, 'backend_fixture.py');
const DIST = join(here, '..', 'dist');

interface Backend {
  proc: ChildProcess;
  base: string;
  dataRoot: string;
}

async function startBackend(scenario: string, port: number): Promise<Backend> {
  const dataRoot = mkdtempSync(join(tmpdir(), `gifguard-${scenario}-`));
  const args = [
    FIXTURE, '--scenario', scenario, '--data-root', dataRoot, '--port', String(port),
  ];
  if (existsSync(DIST)) args.push('--static-dir', DIST);
  const proc = spawn('python3', args, { stdio: ['ignore', 'pipe', 'pipe'] });
  let stderr = '';
  proc.stderr?.on('data', (chunk) => { stderr += String(chunk); });
  const base = `http://127.0.0.1:${port}`;
  for (let attempt = 0; attempt < 100; attempt += 1) {
    if (proc.exitCode !== null) {
      throw new Error(`backend died: ${stderr}`);
    }
    try {
      const ping = await fetch(`${base}/api/disagreements?round=round1`);
      if (ping.ok) return { proc, base, dataRoot };
    } catch {
      // not up yet
    }
    await new Promise((resolve) => setTimeout(resolve, 150));
  }
  proc.kill();
  throw new Error(`backend did not come up on ${base}: ${stderr}`);
}

function logLines(dataRoot: string): string[] {
  return readFileSync(join(dataRoot, 'annotations.jsonl'), 'utf-8')
    .split('\n')
    .filter((line) => line.trim().length > 0);
}

const basePort = 8300 + (process.pid % 800);

describe.sequential('annotation round trip against the live service', () => {
  let backend: Backend;

  beforeAll(async () => {
    backend = await startBackend('roundtrip', basePort);
  }, 30_000);

  afterAll(() => {
    backend?.proc.kill();
  });

  it('labels three GIFs, adjudicates one disagreement, finalizes', async () => {
    const api = new ApiClient(backend.base);

    // annotator a1 labels both GIFs (g0 as cyberbullying, with a criterion)
    const a1 = new LabelingSession(api, 'a1');
    await a1.start();
    expect(a1.snapshot().progress).toEqual({ labeled: 0, assigned: 2 });
    expect(a1.snapshot().current?.id).toBe('g0');
    a1.selectLabel('cyberbullying');
    expect(a1.snapshot().canSubmit).toBe(false); // criterion required first
    a1.toggleCriterion('hate_speech_or_remarks');
    expect(await a1.submit()).toBe(true);
    a1.pressKey('2'); // keyboard path for non_cyberbullying
    expect(await a1.submit()).toBe(true);
    expect(a1.snapshot().finished).toBe(true);

    // annotator a2 disagrees on g0
    const a2 = new LabelingSession(api, 'a2');
    await a2.start();
    expect(a2.snapshot().current?.id).toBe('g0');
    a2.selectLabel('non_cyberbullying');
    expect(await a2.submit()).toBe(true);
    expect(a2.snapshot().finished).toBe(true);

    // the GIF media endpoint serves real animated GIF bytes to the <img>
    const media = await fetch(api.mediaUrl('g0'));
    expect(media.headers.get('content-type')).toBe('image/gif');
    const magic = Buffer.from(await media.arrayBuffer()).subarray(0, 6).toString();
    expect(['GIF87a', 'GIF89a']).toContain(magic);

    // adjudicate the single disagreement
    const queue = new AdjudicationQueue(api, 'judge');
    await queue.load();
    expect(queue.pending.map((d) => d.id)).toEqual(['g0']);
    expect(Object.keys(queue.pending[0].round1_labels).sort()).toEqual(['a1', 'a2']);
    await queue.adjudicate('g0', 'non_cyberbullying');
    expect(queue.pending).toEqual([]);

    // exactly four records: three labels + one adjudication
    expect(logLines(backend.dataRoot).length).toBe(4);

    // finalization succeeds and covers both GIFs
    const summary = await api.finalize();
    expect(summary.finalized).toBe(2);
    expect(summary.counts).toEqual({ non_cyberbullying: 2 });
  }, 30_000);

  it('serves the built UI shell at the web root', async () => {
    if (!existsSync(DIST)) return; // build not run; unit scope only
    const page = await fetch(`${backend.base}/`);
    expect(page.ok).toBe(true);
    const html = await page.text();
    expect(html).toContain('<main id="app">');
  });
});

describe.sequential('agreement endpoint on a scripted disagreement pattern', () => {
  let backend: Backend;

  beforeAll(async () => {
    backend = await startBackend('kappa', basePort + 1);
  }, 30_000);

  afterAll(() => {
    backend?.proc.kill();
  });

  it('returns kappa 0.5 for the 2/1/1 split over four items', async () => {
    const api = new ApiClient(backend.base);
    // k1: cyber, cyber, non, cyber ; k2: cyber, cyber, non, non
    const script: Record<string, Array<'cyberbullying' | 'non_cyberbullying'>> = {
      k1: ['cyberbullying', 'cyberbullying', 'non_cyberbullying', 'cyberbullying'],
      k2: ['cyberbullying', 'cyberbullying', 'non_cyberbullying', 'non_cyberbullying'],
    };
    for (const [rater, labels] of Object.entries(script)) {
      const session = new LabelingSession(api, rater);
      await session.start();
      for (const label of labels) {
        session.selectLabel(label);
        if (label === 'cyberbullying') session.toggleCriterion('directed_bullying');
        expect(await session.submit()).toBe(true);
      }
      expect(session.snapshot().finished).toBe(true);
    }
    const report = await api.agreement('k1', 'k2');
    expect(report.n_items).toBe(4);
    expect(report.percent_agreement).toBeCloseTo(0.75, 12);
    expect(report.cohens_kappa).toBeCloseTo(0.5, 12);
    expect(report.disagreement_ids).toEqual(['q3']);
  }, 30_000);
});
