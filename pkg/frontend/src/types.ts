/** Wire types mirrored from the annotation service's JSON bodies. */

export type LabelValue = 'cyberbullying' | 'non_cyberbullying';

export const CRITERIA = [
  'directed_bullying',
  'hate_speech_or_remarks',
  'hostile_gesture_or_expression',
] as const;

export type Criterion = (typeof CRITERIA)[number];

export const CRITERION_TEXT: Record<Criterion, string> = {
  directed_bullying: 'Bullying directed at a person, race or organization',
  hate_speech_or_remarks: 'Hate speech, cursing or remarks on appearance',
  hostile_gesture_or_expression: 'Hostile gestures or expressions',
};

export interface GifRecord {
  id: string;
  source_url: string;
  tag: string;
  query_label: LabelValue;
  media_path: string;
  sha256: string;
  frame_count: number;
  content_category: string;
  status: string;
}

export interface AnnotationRecord {
  gif_id: string;
  annotator_id: string;
  round: string;
  label: LabelValue;
  criteria_flags: string[];
  timestamp: string;
}

export interface LabelRequest {
  gif_id: string;
  annotator_id: string;
  round: string;
  label: LabelValue;
  criteria_flags: string[];
}

export interface Progress {
  labeled: number;
  assigned: number;
}

export interface AgreementReport {
  n_items: number;
  percent_agreement: number;
  cohens_kappa: number;
  disagreement_ids: string[];
}

export interface Disagreement extends GifRecord {
  round1_labels: Record<string, LabelValue>;
}

export interface FinalizeSummary {
  finalized: number;
  counts: Record<string, number>;
}
