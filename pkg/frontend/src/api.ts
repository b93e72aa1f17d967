import type { Mode, QueryResponse, SessionInfo, Trajectory } from "./types.js";

export class ApiError extends Error {
  constructor(message: string, public status: number) {
    super(message);
    this.name = "ApiError";
  }
}

/** Rejects unsendable questions before any request is made. */
export function validateQuestion(text: string): string | null {
  if (!text || !text.trim()) {
    return "Type a question first.";
  }
  if (text.length > 2000) {
    return "Question is too long (2000 characters max).";
  }
  return null;
}

export class ApiClient {
  constructor(
    private baseUrl: string = "",
    private fetchFn: typeof fetch = globalThis.fetch,
  ) {}

  private async request<T>(path: string, init?: RequestInit): Promise<T> {
    const resp = await this.fetchFn(`${this.baseUrl}${path}`, init);
    if (!resp.ok) {
      let detail = `HTTP ${resp.status}`;
      try {
        const body = await resp.json();
        if (body && typeof body.detail === "string") detail = body.detail;
      } catch {
        // keep the plain status text
      }
      throw new ApiError(detail, resp.status);
    }
    return (await resp.json()) as T;
  }

  createSession(mode: Mode): Promise<SessionInfo> {
    return this.request<SessionInfo>("/sessions", {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify({ mode }),
    });
  }

  query(sessionId: string, text: string): Promise<QueryResponse> {
    return this.request<QueryResponse>(`/sessions/${sessionId}/query`, {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify({ text }),
    });
  }

  fetchTrajectory(sessionId: string, trajectoryId: string): Promise<Trajectory> {
    return this.request<Trajectory>(`/sessions/${sessionId}/trajectory/${trajectoryId}`);
  }

  /** Artifact URLs from the server are session-relative paths. */
  absoluteUrl(path: string): string {
    return `${this.baseUrl}${path}`;
  }
}
