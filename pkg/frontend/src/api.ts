/** Typed client over the archive's JSON endpoints.
 *
 * The UI consumes only this HTTP surface; configuration is a single base URL.
 */

export interface SearchHit {
  paper_id: string;
  title: string;
  abstract: string;
  similarity: number;
  rank: number;
  url: string;
}

export interface PaperView {
  paper_id: string;
  title: string;
  authors: string[];
  abstract: string;
  lab_id: string | null;
  uploaded_at: string;
  content_hash: string;
  review_status: string;
  review_note: string | null;
  source_format: string;
  body_text: string;
}

export class ApiError extends Error {
  constructor(
    readonly code: string,
    message: string,
    readonly status: number,
  ) {
    super(message);
    this.name = 'ApiError';
  }
}

async function request<T>(url: string, init?: RequestInit): Promise<T> {
  const resp = await fetch(url, init);
  const payload: unknown = await resp.json().catch(() => ({}));
  if (!resp.ok) {
    const body = payload as { code?: string; message?: string };
    throw new ApiError(body.code ?? 'internal_error', body.message ?? resp.statusText, resp.status);
  }
  return payload as T;
}

export class ArchiveApi {
  constructor(readonly baseUrl: string) {}

  search(query: string, k = 5, excludeFlagged = false): Promise<SearchHit[]> {
    const params = new URLSearchParams({ q: query, k: String(k) });
    if (excludeFlagged) params.set('exclude_flagged', 'true');
    return request<SearchHit[]>(`${this.baseUrl}/api/search?${params}`);
  }

  getPaper(paperId: string): Promise<PaperView> {
    return request<PaperView>(`${this.baseUrl}/api/papers/${encodeURIComponent(paperId)}`);
  }

  submitReview(paperId: string, status: string, note: string): Promise<PaperView> {
    return request<PaperView>(
      `${this.baseUrl}/api/papers/${encodeURIComponent(paperId)}/review`,
      {
        method: 'POST',
        headers: { 'Content-Type': 'application/json' },
        body: JSON.stringify({ status, note }),
      },
    );
  }
}
