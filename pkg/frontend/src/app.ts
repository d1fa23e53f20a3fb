/** DOM wiring: annotator login, the labeling screen, and adjudication. */

import { AdjudicationQueue } from './adjudication.js';
import { ApiClient, ApiError } from './api.js';
import { LabelingSession } from './session.js';
import { CRITERIA, CRITERION_TEXT, type Criterion, type LabelValue } from './types.js';

const api = new ApiClient('');

function el<K extends keyof HTMLElementTagNameMap>(
  tag: K,
  className = '',
  text = '',
): HTMLElementTagNameMap[K] {
  const node = document.createElement(tag);
  if (className) node.className = className;
  if (text) node.textContent = text;
  return node;
}

function root(): HTMLElement {
  const node = document.getElementById('app');
  if (!node) throw new Error('missing #app mount point');
  return node;
}

// ---------------------------------------------------------------- login

function renderLogin(): void {
  const mount = root();
  mount.replaceChildren();
  const card = el('div', 'card');
  card.append(el('h1', '', 'GIF annotation'));
  const form = el('form');
  const input = el('input');
  input.placeholder = 'annotator id';
  input.required = true;
  const roleSelect = el('select');
  for (const [value, text] of [['label', 'Label my assignment'],
                               ['adjudicate', 'Adjudicate disagreements']]) {
    const option = el('option', '', text);
    option.value = value;
    roleSelect.append(option);
  }
  const go = el('button', 'primary', 'Start');
  form.append(input, roleSelect, go);
  form.addEventListener('submit', (event) => {
    event.preventDefault();
    const annotator = input.value.trim();
    if (!annotator) return;
    if (roleSelect.value === 'adjudicate') {
      void renderAdjudication(annotator);
    } else {
      void startLabeling(annotator);
    }
  });
  card.append(form);
  mount.append(card);
}

// ------------------------------------------------------------- labeling

async function startLabeling(annotator: string): Promise<void> {
  const session = new LabelingSession(api, annotator);
  try {
    await session.start();
  } catch (err) {
    renderFatal(err);
    return;
  }
  renderSession(session);
  document.onkeydown = (event) => {
    if (event.target instanceof HTMLInputElement) return;
    session.pressKey(event.key);
    renderSession(session);
  };
}

function renderSession(session: LabelingSession): void {
  const state = session.snapshot();
  const mount = root();
  mount.replaceChildren();
  const card = el('div', 'card');

  const progress = el('div', 'progress',
    `${state.annotatorId} — ${state.progress.labeled}/${state.progress.assigned} labeled`);
  card.append(progress);

  if (state.finished) {
    card.append(el('h2', '', 'Assignment complete'));
    card.append(el('p', '', 'Every GIF in your block is labeled. Thank you!'));
    if (state.pendingRetries > 0) {
      card.append(retryBanner(session, state.pendingRetries));
    }
    mount.append(card);
    return;
  }

  const gif = state.current;
  if (!gif) return;
  const media = el('div', 'media');
  const img = el('img');
  img.src = session.mediaUrl() ?? '';
  img.alt = `animated GIF ${gif.id}`;
  media.append(img);
  card.append(media);
  card.append(el('div', 'gif-meta', `#${gif.tag} · ${gif.frame_count} frames`));

  const labels = el('div', 'labels');
  labels.append(labelButton(session, 'cyberbullying', '1 · Cyberbullying',
                            state.selectedLabel));
  labels.append(labelButton(session, 'non_cyberbullying', '2 · Not cyberbullying',
                            state.selectedLabel));
  card.append(labels);

  const criteriaBox = el('fieldset', 'criteria');
  criteriaBox.disabled = !state.criteriaEnabled;
  criteriaBox.append(el('legend', '', 'Why is it cyberbullying?'));
  for (const criterion of CRITERIA) {
    const row = el('label', 'criterion');
    const checkbox = el('input');
    checkbox.type = 'checkbox';
    checkbox.checked = state.selectedCriteria.includes(criterion);
    checkbox.addEventListener('change', () => {
      session.toggleCriterion(criterion as Criterion);
      renderSession(session);
    });
    row.append(checkbox, el('span', '', CRITERION_TEXT[criterion]));
    criteriaBox.append(row);
  }
  card.append(criteriaBox);

  if (state.error) card.append(el('div', 'error', state.error));
  if (state.selectedLabel === 'cyberbullying' && state.selectedCriteria.length === 0) {
    card.append(el('div', 'hint', 'Pick at least one criterion to submit.'));
  }
  if (state.pendingRetries > 0) card.append(retryBanner(session, state.pendingRetries));

  const submit = el('button', 'primary', 'Submit');
  submit.disabled = !state.canSubmit;
  submit.addEventListener('click', () => {
    void session.submit().then(() => renderSession(session));
  });
  card.append(submit);
  mount.append(card);
}

function labelButton(session: LabelingSession, value: LabelValue, text: string,
                     selected: string | null): HTMLButtonElement {
  const button = el('button', selected === value ? 'label selected' : 'label', text);
  button.addEventListener('click', () => {
    session.selectLabel(value);
    renderSession(session);
  });
  return button;
}

function retryBanner(session: LabelingSession, pending: number): HTMLElement {
  const banner = el('div', 'retry');
  banner.append(el('span', '', `${pending} submission(s) waiting for the backend.`));
  const retry = el('button', '', 'Retry now');
  retry.addEventListener('click', () => {
    void session.retryPending().then(() => renderSession(session));
  });
  banner.append(retry);
  return banner;
}

// --------------------------------------------------------- adjudication

async function renderAdjudication(adjudicator: string): Promise<void> {
  const queue = new AdjudicationQueue(api, adjudicator);
  try {
    await queue.load();
  } catch (err) {
    renderFatal(err);
    return;
  }
  drawAdjudication(queue);
}

function drawAdjudication(queue: AdjudicationQueue): void {
  const mount = root();
  mount.replaceChildren();
  const card = el('div', 'card wide');
  card.append(el('h2', '', 'Round-1 disagreements'));

  if (queue.isEmpty) {
    card.append(el('p', 'empty', 'No disagreements pending — nothing to adjudicate.'));
    mount.append(card);
    return;
  }

  for (const item of queue.pending) {
    const row = el('div', 'disagreement');
    const img = el('img');
    img.src = api.mediaUrl(item.id);
    img.alt = `animated GIF ${item.id}`;
    row.append(img);

    const votes = el('div', 'votes');
    votes.append(el('div', 'gif-meta', `${item.id} · #${item.tag}`));
    for (const [rater, label] of Object.entries(item.round1_labels)) {
      votes.append(el('div', 'vote', `${rater}: ${label.replace('_', ' ')}`));
    }
    row.append(votes);

    const actions = el('div', 'actions');
    const asCyber = el('button', 'label', 'Cyberbullying');
    asCyber.addEventListener('click', () => {
      void queue
        .adjudicate(item.id, 'cyberbullying', ['directed_bullying'])
        .then(() => drawAdjudication(queue));
    });
    const asClean = el('button', 'label', 'Not cyberbullying');
    asClean.addEventListener('click', () => {
      void queue.adjudicate(item.id, 'non_cyberbullying').then(() => drawAdjudication(queue));
    });
    actions.append(asCyber, asClean);
    row.append(actions);
    card.append(row);
  }
  mount.append(card);
}

function renderFatal(err: unknown): void {
  const mount = root();
  mount.replaceChildren();
  const message = err instanceof ApiError ? `${err.code}: ${err.message}` : String(err);
  mount.append(el('div', 'card error', message));
}

renderLogin();
