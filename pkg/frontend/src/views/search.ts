/** Search view: a query box and the ranked hit list.
 *
 * Hits are rendered exactly in the order the server returns them — ranking is
 * the server's contract and the UI must not re-sort or re-score. The printed
 * rank and similarity are the API values verbatim.
 */

import { ApiError, ArchiveApi, SearchHit } from '../api.js';
import { el, mount } from '../dom.js';

export function renderHits(container: HTMLElement, hits: SearchHit[]): void {
  if (hits.length === 0) {
    mount(container, el('p', { class: 'empty', 'data-state': 'empty' }, 'no results'));
    return;
  }
  mount(
    container,
    el(
      'ol',
      { class: 'hits' },
      ...hits.map((hit) =>
        el(
          'li',
          { class: 'hit', 'data-paper-id': hit.paper_id },
          el(
            'a',
            { href: `#/paper/${hit.paper_id}`, class: 'hit-title' },
            hit.title,
          ),
          el('span', { class: 'hit-rank' }, `rank ${String(hit.rank)}`),
          el('span', { class: 'hit-similarity' }, String(hit.similarity)),
          el('p', { class: 'hit-abstract' }, hit.abstract),
        ),
      ),
    ),
  );
}

export function renderSearchView(root: HTMLElement, api: ArchiveApi): HTMLElement {
  const input = el('input', {
    type: 'search',
    name: 'q',
    placeholder: 'search archived papers',
  }) as HTMLInputElement;
  const button = el('button', { type: 'submit' }, 'search');
  const status = el('p', { class: 'status', role: 'status' });
  const results = el('div', { class: 'results' });
  const form = el('form', { class: 'search-form' }, input, button);

  form.addEventListener('submit', (event) => {
    event.preventDefault();
    void runSearch(input.value);
  });

  async function runSearch(query: string): Promise<void> {
    if (!query.trim()) {
      status.textContent = 'enter a query';
      return;
    }
    status.textContent = 'searching…';
    try {
      const hits = await api.search(query, 10);
      status.textContent = '';
      renderHits(results, hits);
    } catch (err) {
      const code = err instanceof ApiError ? err.code : 'internal_error';
      status.textContent = `search failed: ${code}`;
    }
  }

  mount(root, el('section', { class: 'search-view' }, form, status, results));
  return results;
}
