/** Thin typed client for the treenav HTTP API.

The fetch function is injected so tests can substitute a fake transport;
the default is the ambient global. All methods return parsed JSON or
throw ApiError carrying the server's error envelope.
*/

import type {
  Candidate,
  ErrorEnvelope,
  HealthPayload,
  LinkPayload,
  SidestepPayload,
  TermPayload,
} from "./types.js";

export type FetchLike = (url: string) => Promise<Response>;

export class ApiError extends Error {
  readonly status: number;
  readonly code: string;

  constructor(status: number, code: string, message: string) {
    super(message);
    this.name = "ApiError";
    this.status = status;
    this.code = code;
  }
}

function isEnvelope(body: unknown): body is ErrorEnvelope {
  if (typeof body !== "object" || body === null) return false;
  const err = (body as { error?: unknown }).error;
  return (
    typeof err === "object" &&
    err !== null &&
    typeof (err as { code?: unknown }).code === "string" &&
    typeof (err as { message?: unknown }).message === "string"
  );
}

export class ApiClient {
  private readonly base: string;
  private readonly fetchFn: FetchLike;

  /** base is prepended verbatim; "" targets the page's own origin. */
  constructor(base = "", fetchFn: FetchLike = (url) => fetch(url)) {
    this.base = base.endsWith("/") ? base.slice(0, -1) : base;
    this.fetchFn = fetchFn;
  }

  private async get<T>(path: string): Promise<T> {
    const resp = await this.fetchFn(this.base + path);
    let body: unknown = null;
    try {
      body = await resp.json();
    } catch {
      body = null;
    }
    if (!resp.ok) {
      if (isEnvelope(body)) {
        throw new ApiError(resp.status, body.error.code, body.error.message);
      }
      throw new ApiError(resp.status, "http_error", `request failed with status ${resp.status}`);
    }
    return body as T;
  }

  health(): Promise<HealthPayload> {
    return this.get("/health");
  }

  search(query: string, limit?: number): Promise<Candidate[]> {
    let path = `/api/search?q=${encodeURIComponent(query)}`;
    if (limit !== undefined) path += `&limit=${limit}`;
    return this.get(path);
  }

  term(nodeId: number, leafLimit?: number): Promise<TermPayload> {
    let path = `/api/term/${nodeId}`;
    if (leafLimit !== undefined) path += `?leaf_limit=${leafLimit}`;
    return this.get(path);
  }

  links(nodeId: number, limit?: number): Promise<LinkPayload[]> {
    let path = `/api/term/${nodeId}/links`;
    if (limit !== undefined) path += `?limit=${limit}`;
    return this.get(path);
  }

  sidestep(nodeId: number, leafLimit?: number): Promise<SidestepPayload> {
    let path = `/api/term/${nodeId}/sidestep`;
    if (leafLimit !== undefined) path += `?leaf_limit=${leafLimit}`;
    return this.get(path);
  }
}
