/** Thin client over the annotation service's REST endpoints. */

import type {
  AgreementReport,
  AnnotationRecord,
  Disagreement,
  FinalizeSummary,
  GifRecord,
  LabelRequest,
  Progress,
} from './types.js';

export class ApiError extends Error {
  constructor(
    public readonly status: number,
    public readonly code: string,
    detail: string,
  ) {
    super(detail);
  }

  /** 4xx errors are user-facing; everything else is transient. */
  get isClientError(): boolean {
    return this.status >= 400 && this.status < 500;
  }
}

type FetchLike = (input: string, init?: RequestInit) => Promise<Response>;

export class ApiClient {
  constructor(
    private readonly baseUrl: string = '',
    private readonly fetchFn: FetchLike = (input, init) => fetch(input, init),
  ) {}

  private async request(path: string, init?: RequestInit): Promise<Response> {
    const response = await this.fetchFn(`${this.baseUrl}${path}`, init);
    if (!response.ok) {
      let code = 'http_error';
      let detail = `HTTP ${response.status}`;
      try {
        const body = await response.json();
        code = body.error ?? code;
        detail = body.detail ?? detail;
      } catch {
        // non-JSON error body; keep defaults
      }
      throw new ApiError(response.status, code, detail);
    }
    return response;
  }

  async nextGif(annotator: string, round = 'round1'): Promise<GifRecord | null> {
    const params = new URLSearchParams({ annotator, round });
    const response = await this.request(`/api/next?${params}`);
    if (response.status === 204) return null;
    return (await response.json()) as GifRecord;
  }

  mediaUrl(gifId: string): string {
    return `${this.baseUrl}/api/gif/${encodeURIComponent(gifId)}/media`;
  }

  async submitLabel(request: LabelRequest): Promise<AnnotationRecord> {
    const response = await this.request('/api/label', {
      method: 'POST',
      headers: { 'Content-Type': 'application/json' },
      body: JSON.stringify(request),
    });
    return (await response.json()) as AnnotationRecord;
  }

  async progress(annotator: string, round = 'round1'): Promise<Progress> {
    const params = new URLSearchParams({ annotator, round });
    return (await (await this.request(`/api/progress?${params}`)).json()) as Progress;
  }

  async agreement(a: string, b: string, round = 'round1'): Promise<AgreementReport> {
    const params = new URLSearchParams({ a, b, round });
    return (await (await this.request(`/api/agreement?${params}`)).json()) as AgreementReport;
  }

  async disagreements(round = 'round1'): Promise<Disagreement[]> {
    const params = new URLSearchParams({ round });
    return (await (await this.request(`/api/disagreements?${params}`)).json()) as Disagreement[];
  }

  async finalize(): Promise<FinalizeSummary> {
    return (await (await this.request('/api/finalize', { method: 'POST' })).json()) as FinalizeSummary;
  }
}
