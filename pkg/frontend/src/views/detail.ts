/** Paper detail: metadata, body, and the review controls.
 *
 * The server is authoritative: submitting a review re-renders the whole view
 * from the response payload, and errors leave the displayed state untouched.
 */

import { ApiError, ArchiveApi, PaperView } from '../api.js';
import { el, mount } from '../dom.js';

const REVIEW_STATUSES = ['unreviewed', 'verified', 'flagged'];

function metadataRow(label: string, value: string): HTMLElement {
  return el(
    'tr',
    {},
    el('th', { scope: 'row' }, label),
    el('td', { 'data-field': label.replace(/ /g, '_') }, value),
  );
}

export function renderPaper(root: HTMLElement, api: ArchiveApi, paper: PaperView): void {
  const error = el('p', { class: 'review-error', role: 'alert' });
  const note = el('input', {
    type: 'text',
    name: 'note',
    placeholder: 'review note',
    value: paper.review_note ?? '',
  }) as HTMLInputElement;
  const status = el('select', { name: 'status' }) as HTMLSelectElement;
  for (const option of REVIEW_STATUSES) {
    status.append(el('option', { value: option }, option));
  }
  status.value = paper.review_status;

  const form = el(
    'form',
    { class: 'review-form' },
    status,
    note,
    el('button', { type: 'submit' }, 'submit review'),
    error,
  );
  form.addEventListener('submit', (event) => {
    event.preventDefault();
    void submit();
  });

  async function submit(): Promise<void> {
    error.textContent = '';
    try {
      const updated = await api.submitReview(paper.paper_id, status.value, note.value);
      renderPaper(root, api, updated);
    } catch (err) {
      // inline error; the rendered paper state is left exactly as it was
      error.textContent =
        err instanceof ApiError ? `${err.code}: ${err.message}` : String(err);
    }
  }

  mount(
    root,
    el(
      'article',
      { class: 'paper-detail', 'data-paper-id': paper.paper_id },
      el('h1', { class: 'paper-title' }, paper.title),
      el(
        'table',
        { class: 'paper-meta' },
        metadataRow('authors', paper.authors.join(', ')),
        metadataRow('lab id', paper.lab_id ?? ''),
        metadataRow('uploaded at', paper.uploaded_at),
        metadataRow('content hash', paper.content_hash),
        metadataRow('source format', paper.source_format),
        metadataRow('review status', paper.review_status),
        metadataRow('review note', paper.review_note ?? ''),
      ),
      el('pre', { class: 'paper-body' }, paper.body_text),
      form,
    ),
  );
}

export async function renderPaperDetail(
  root: HTMLElement,
  api: ArchiveApi,
  paperId: string,
): Promise<void> {
  try {
    renderPaper(root, api, await api.getPaper(paperId));
  } catch (err) {
    if (err instanceof ApiError && err.status === 404) {
      mount(root, el('p', { class: 'not-found', 'data-state': 'not-found' }, 'paper not found'));
      return;
    }
    const code = err instanceof ApiError ? err.code : 'internal_error';
    mount(root, el('p', { class: 'load-error' }, `failed to load paper: ${code}`));
  }
}
