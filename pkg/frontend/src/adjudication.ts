/** Adjudication queue: round-1 disagreements awaiting a round-2 decision.
 *
 * The list shrinks locally on each decision — no reload round-trip.
 */

import { ApiClient } from './api.js';
import type { Criterion, Disagreement, LabelValue } from './types.js';

export class AdjudicationQueue {
  private items: Disagreement[] = [];
  private loaded = false;

  constructor(
    private readonly api: ApiClient,
    readonly adjudicatorId: string,
  ) {}

  async load(): Promise<void> {
    this.items = await this.api.disagreements('round1');
    this.loaded = true;
  }

  get pending(): Disagreement[] {
    return [...this.items];
  }

  get isEmpty(): boolean {
    return this.loaded && this.items.length === 0;
  }

  async adjudicate(
    gifId: string,
    label: LabelValue,
    criteria: Criterion[] = [],
  ): Promise<void> {
    await this.api.submitLabel({
      gif_id: gifId,
      annotator_id: this.adjudicatorId,
      round: 'round2',
      label,
      criteria_flags: label === 'cyberbullying' ? criteria : [],
    });
    this.items = this.items.filter((item) => item.id !== gifId);
  }
}
