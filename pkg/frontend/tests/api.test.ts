import { describe, expect, it, vi } from "vitest";

import { ApiClient, ApiError, validateQuestion } from "../src/api.js";

function jsonResponse(body: unknown, status = 200): Response {
  return new Response(JSON.stringify(body), {
    status,
    headers: { "Content-Type": "application/json" },
  });
}

describe("validateQuestion", () => {
  it("rejects empty and whitespace-only text without a request", () => {
    expect(validateQuestion("")).toBeTruthy();
    expect(validateQuestion("   ")).toBeTruthy();
    expect(validateQuestion("Where are most gyms located?")).toBeNull();
  });
});

describe("ApiClient", () => {
  it("creates sessions with the requested mode", async () => {
    const fetchFn = vi.fn(async () => jsonResponse({ session_id: "s1", mode: "agentic" }));
    const client = new ApiClient("http://h:1", fetchFn as unknown as typeof fetch);
    const info = await client.createSession("agentic");
    expect(info.session_id).toBe("s1");
    const [url, init] = fetchFn.mock.calls[0]!;
    expect(url).toBe("http://h:1/sessions");
    expect(JSON.parse((init as RequestInit).body as string)).toEqual({ mode: "agentic" });
  });

  it("posts query text to the session endpoint", async () => {
    const fetchFn = vi.fn(async () =>
      jsonResponse({ mode: "agentic", answer: "", succeeded: true, artifacts: [], trajectory_id: null, sql_gen_calls: 0 }),
    );
    const client = new ApiClient("", fetchFn as unknown as typeof fetch);
    await client.query("s1", "hello");
    const [url, init] = fetchFn.mock.calls[0]!;
    expect(url).toBe("/sessions/s1/query");
    expect(JSON.parse((init as RequestInit).body as string)).toEqual({ text: "hello" });
  });

  it("throws ApiError with the server detail on failure", async () => {
    const fetchFn = vi.fn(async () => jsonResponse({ detail: "backend offline" }, 503));
    const client = new ApiClient("", fetchFn as unknown as typeof fetch);
    await expect(client.query("s1", "hi")).rejects.toMatchObject({
      name: "ApiError",
      message: "backend offline",
      status: 503,
    });
  });

  it("falls back to the status code when the body is not json", async () => {
    const fetchFn = vi.fn(async () => new Response("boom", { status: 500 }));
    const client = new ApiClient("", fetchFn as unknown as typeof fetch);
    await expect(client.createSession("naive")).rejects.toThrowError(/HTTP 500/);
  });

  it("builds absolute artifact urls", () => {
    const client = new ApiClient("http://h:9");
    expect(client.absoluteUrl("/sessions/s/artifacts/a")).toBe(
      "http://h:9/sessions/s/artifacts/a",
    );
  });

  it("propagates ApiError type", async () => {
    const fetchFn = vi.fn(async () => jsonResponse({ detail: "nope" }, 404));
    const client = new ApiClient("", fetchFn as unknown as typeof fetch);
    try {
      await client.fetchTrajectory("s1", "t1");
      expect.unreachable();
    } catch (err) {
      expect(err).toBeInstanceOf(ApiError);
    }
  });
});
