/** Hash-routed single page app: #/search (default) and #/paper/<id>. */

import { ArchiveApi } from './api.js';
import { renderPaperDetail } from './views/detail.js';
import { renderSearchView } from './views/search.js';

declare global {
  interface Window {
    ARCHIVE_API_BASE?: string;
  }
}

export function route(root: HTMLElement, api: ArchiveApi, hash: string): void {
  const paperMatch = /^#\/paper\/(.+)$/.exec(hash);
  if (paperMatch && paperMatch[1]) {
    void renderPaperDetail(root, api, decodeURIComponent(paperMatch[1]));
    return;
  }
  renderSearchView(root, api);
}

export function start(): void {
  const root = document.getElementById('app');
  if (!root) return;
  const api = new ArchiveApi(window.ARCHIVE_API_BASE ?? 'http://127.0.0.1:8571');
  const render = () => route(root, api, window.location.hash);
  window.addEventListener('hashchange', render);
  render();
}
