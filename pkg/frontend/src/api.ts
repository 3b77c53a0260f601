// Typed client for the annotation API.
//
// Submissions are all-or-nothing: a 422 leaves no local state behind,
// and network failures park the submission in a retry queue rather
// than dropping it.

import type {
  AnnotationBody,
  AnnotationRecord,
  CitationResponse,
  DecisionTreeConfig,
  VisBundle,
} from "./types.js";

export type FetchLike = (url: string, init?: RequestInit) => Promise<Response>;

export class ApiValidationError extends Error {
  details: unknown;

  constructor(message: string, details: unknown) {
    super(message);
    this.details = details;
  }
}

export class ApiClient {
  baseUrl: string;
  private fetchImpl: FetchLike;

  constructor(baseUrl = "", fetchImpl: FetchLike = fetch.bind(globalThis)) {
    this.baseUrl = baseUrl.replace(/\/$/, "");
    this.fetchImpl = fetchImpl;
  }

  private async getJson<T>(path: string): Promise<T> {
    const resp = await this.fetchImpl(`${this.baseUrl}${path}`);
    if (!resp.ok) throw new Error(`GET ${path} failed: ${resp.status}`);
    return (await resp.json()) as T;
  }

  async health(): Promise<boolean> {
    try {
      const data = await this.getJson<{ status: string }>("/api/health");
      return data.status === "ok";
    } catch {
      return false;
    }
  }

  queue(): Promise<{ pending: string[] }> {
    return this.getJson("/api/queue");
  }

  citation(id: string): Promise<CitationResponse> {
    return this.getJson(`/api/citations/${encodeURIComponent(id)}`);
  }

  decisionTree(): Promise<DecisionTreeConfig> {
    return this.getJson("/api/decision-tree");
  }

  listBundles(): Promise<{ bundles: string[] }> {
    return this.getJson("/api/bundles");
  }

  bundle<T = VisBundle>(name: string): Promise<T> {
    return this.getJson(`/api/bundles/${name}`);
  }

  async submitAnnotation(
    citationId: string,
    body: AnnotationBody,
  ): Promise<AnnotationRecord> {
    const resp = await this.fetchImpl(
      `${this.baseUrl}/api/citations/${encodeURIComponent(citationId)}/annotation`,
      {
        method: "PUT",
        headers: { "Content-Type": "application/json" },
        body: JSON.stringify(body),
      },
    );
    if (resp.status === 422) {
      const payload = await resp.json();
      throw new ApiValidationError("annotation rejected", payload.detail);
    }
    if (!resp.ok) throw new Error(`PUT annotation failed: ${resp.status}`);
    const payload = (await resp.json()) as { record: AnnotationRecord };
    return payload.record;
  }
}

export interface QueuedSubmission {
  citationId: string;
  body: AnnotationBody;
}

/**
 * Wraps ApiClient.submitAnnotation with an offline retry queue.
 * Validation errors (422) are surfaced immediately, never queued:
 * retrying an invalid body can't succeed. Network failures enqueue
 * the submission for a later flush.
 */
export class OfflineQueue {
  private client: ApiClient;
  pending: QueuedSubmission[] = [];

  constructor(client: ApiClient) {
    this.client = client;
  }

  async submit(citationId: string, body: AnnotationBody): Promise<AnnotationRecord | null> {
    try {
      return await this.client.submitAnnotation(citationId, body);
    } catch (err) {
      if (err instanceof ApiValidationError) throw err;
      this.pending.push({ citationId, body });
      return null;
    }
  }

  /** Retry queued submissions in order; stops at the first network
   * failure so ordering is preserved. Returns how many flushed. */
  async flush(): Promise<number> {
    let flushed = 0;
    while (this.pending.length > 0) {
      const next = this.pending[0];
      try {
        await this.client.submitAnnotation(next.citationId, next.body);
      } catch (err) {
        if (err instanceof ApiValidationError) {
          // invalid entries are dropped loudly rather than wedging the queue
          this.pending.shift();
          throw err;
        }
        break;
      }
      this.pending.shift();
      flushed += 1;
    }
    return flushed;
  }
}
