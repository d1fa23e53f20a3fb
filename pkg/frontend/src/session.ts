/** Labeling session state machine.
 *
 * Pure with respect to the DOM: views render from `snapshot()` and call the
 * action methods. Every record the backend receives traces to exactly one
 * `submit()` call, and submissions lost to network failures queue for retry
 * without losing the GIF on screen.
 */

import { ApiClient, ApiError } from './api.js';
import type { Criterion, GifRecord, LabelRequest, LabelValue, Progress } from './types.js';

export interface SessionSnapshot {
  annotatorId: string;
  round: string;
  current: GifRecord | null;
  progress: Progress;
  selectedLabel: LabelValue | null;
  selectedCriteria: Criterion[];
  criteriaEnabled: boolean;
  canSubmit: boolean;
  finished: boolean;
  error: string | null;
  pendingRetries: number;
}

export class LabelingSession {
  private current: GifRecord | null = null;
  private progress: Progress = { labeled: 0, assigned: 0 };
  private selectedLabel: LabelValue | null = null;
  private selectedCriteria = new Set<Criterion>();
  private finished = false;
  private error: string | null = null;
  private retryQueue: LabelRequest[] = [];

  constructor(
    private readonly api: ApiClient,
    readonly annotatorId: string,
    readonly round: string = 'round1',
  ) {}

  async start(): Promise<void> {
    this.progress = await this.api.progress(this.annotatorId, this.round);
    await this.advance();
  }

  private async advance(): Promise<void> {
    this.selectedLabel = null;
    this.selectedCriteria.clear();
    this.current = await this.api.nextGif(this.annotatorId, this.round);
    if (this.current === null) this.finished = true;
  }

  selectLabel(label: LabelValue): void {
    this.selectedLabel = label;
    if (label !== 'cyberbullying') this.selectedCriteria.clear();
    this.error = null;
  }

  /** Keyboard shortcuts 1/2 make exactly the same state change as clicks. */
  pressKey(key: string): void {
    if (key === '1') this.selectLabel('cyberbullying');
    if (key === '2') this.selectLabel('non_cyberbullying');
  }

  toggleCriterion(criterion: Criterion): void {
    if (this.selectedLabel !== 'cyberbullying') return; // checkboxes disabled
    if (this.selectedCriteria.has(criterion)) {
      this.selectedCriteria.delete(criterion);
    } else {
      this.selectedCriteria.add(criterion);
    }
  }

  get canSubmit(): boolean {
    if (this.current === null || this.selectedLabel === null) return false;
    if (this.selectedLabel === 'cyberbullying' && this.selectedCriteria.size === 0) {
      return false; // mirrors the backend invariant
    }
    return true;
  }

  /** Submit the current selection; resolves true when the queue advanced. */
  async submit(): Promise<boolean> {
    if (!this.canSubmit || this.current === null || this.selectedLabel === null) {
      return false;
    }
    const request: LabelRequest = {
      gif_id: this.current.id,
      annotator_id: this.annotatorId,
      round: this.round,
      label: this.selectedLabel,
      criteria_flags: [...this.selectedCriteria].sort(),
    };
    try {
      await this.api.submitLabel(request);
    } catch (err) {
      if (err instanceof ApiError && err.isClientError) {
        this.error = err.message; // shown inline; current GIF stays
        return false;
      }
      this.retryQueue.push(request); // network loss: queue and move on later
      this.error = 'submission queued: backend unreachable';
      return false;
    }
    this.progress = { ...this.progress, labeled: this.progress.labeled + 1 };
    this.error = null;
    await this.advance();
    return true;
  }

  /** Re-send queued submissions; advances past the current GIF on success. */
  async retryPending(): Promise<number> {
    let sent = 0;
    while (this.retryQueue.length > 0) {
      const request = this.retryQueue[0];
      try {
        await this.api.submitLabel(request);
      } catch {
        break;
      }
      this.retryQueue.shift();
      sent += 1;
      this.progress = { ...this.progress, labeled: this.progress.labeled + 1 };
      if (this.current?.id === request.gif_id) {
        this.error = null;
        await this.advance();
      }
    }
    return sent;
  }

  mediaUrl(): string | null {
    return this.current ? this.api.mediaUrl(this.current.id) : null;
  }

  snapshot(): SessionSnapshot {
    return {
      annotatorId: this.annotatorId,
      round: this.round,
      current: this.current,
      progress: this.progress,
      selectedLabel: this.selectedLabel,
      selectedCriteria: [...this.selectedCriteria].sort(),
      criteriaEnabled: this.selectedLabel === 'cyberbullying',
      canSubmit: this.canSubmit,
      finished: this.finished,
      error: this.error,
      pendingRetries: this.retryQueue.length,
    };
  }
}
