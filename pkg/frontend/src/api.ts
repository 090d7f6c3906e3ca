// Typed client for the recommendation service. All geometry and ranking
// lives server-side; this file only moves JSON and SVG bytes.

import type { AssembleResult, SessionPatch, SessionPayload } from "./types.js";

export class ApiError extends Error {
  constructor(
    public status: number,
    public code: string,
    message: string,
  ) {
    super(message);
  }
}

async function parseError(response: Response): Promise<ApiError> {
  let code = "UNKNOWN";
  let message = response.statusText;
  try {
    const body = (await response.json()) as { code?: string; message?: string };
    code = body.code ?? code;
    message = body.message ?? message;
  } catch {
    // non-JSON error body; keep the status text
  }
  return new ApiError(response.status, code, message);
}

export class ApiClient {
  // Writers to one session are serialized client-side: a PATCH issued while
  // another is in flight waits its turn, so the server never sees
  // interleaved edits from this tab.
  private patchQueue: Promise<unknown> = Promise.resolve();

  constructor(
    public baseUrl: string,
    private fetchImpl: typeof fetch = fetch,
  ) {}

  private async request(path: string, init?: RequestInit): Promise<Response> {
    const response = await this.fetchImpl(`${this.baseUrl}${path}`, init);
    if (!response.ok) {
      throw await parseError(response);
    }
    return response;
  }

  async createSession(
    markdown: string,
    canvas: { width_px: number; height_px: number; background?: string },
    options: { alpha?: number; seed?: number } = {},
  ): Promise<SessionPayload> {
    const response = await this.request("/sessions", {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify({ markdown, canvas, ...options }),
    });
    return (await response.json()) as SessionPayload;
  }

  async getSession(sessionId: string): Promise<SessionPayload> {
    const response = await this.request(`/sessions/${sessionId}`);
    return (await response.json()) as SessionPayload;
  }

  patchSession(sessionId: string, patch: SessionPatch): Promise<SessionPayload> {
    const run = async (): Promise<SessionPayload> => {
      const response = await this.request(`/sessions/${sessionId}`, {
        method: "PATCH",
        headers: { "content-type": "application/json" },
        body: JSON.stringify(patch),
      });
      return (await response.json()) as SessionPayload;
    };
    const next = this.patchQueue.then(run, run);
    this.patchQueue = next.catch(() => undefined);
    return next;
  }

  async assemble(sessionId: string): Promise<AssembleResult> {
    const response = await this.request(`/sessions/${sessionId}/assemble`, { method: "POST" });
    const svg = await response.text();
    const header = response.headers.get("x-infoforge-provenance");
    const provenance = header ? JSON.parse(atob(header)) : {};
    return { svg, provenance };
  }

  async getAssetJson<T>(path: string): Promise<T> {
    const response = await this.request(`/assets/${path}`);
    return (await response.json()) as T;
  }

  assetUrl(path: string): string {
    return `${this.baseUrl}/assets/${path}`;
  }
}
