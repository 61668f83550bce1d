import { describe, expect, it, vi } from "vitest";
import {
  ApiClient,
  ApiError,
  matchesRoute,
  ROUTES,
} from "../src/api.js";

function jsonResponse(body: unknown, status = 200): Response {
  return new Response(JSON.stringify(body), {
    status,
    headers: { "Content-Type": "application/json" },
  });
}

interface Recorded {
  url: string;
  method: string;
  headers: Record<string, string>;
  body: unknown;
}

function stubClient(
  handler: (r: Recorded) => Response,
): { client: ApiClient; calls: Recorded[] } {
  const calls: Recorded[] = [];
  const fetchImpl = async (url: string, init?: RequestInit) => {
    const rec: Recorded = {
      url,
      method: init?.method ?? "GET",
      headers: (init?.headers as Record<string, string>) ?? {},
      body:
        typeof init?.body === "string" ? JSON.parse(init.body) : undefined,
    };
    calls.push(rec);
    return handler(rec);
  };
  return { client: new ApiClient("http://test", fetchImpl), calls };
}

describe("session handling", () => {
  it("login stores the token and sends credentials", async () => {
    const { client, calls } = stubClient(() =>
      jsonResponse({ sessionId: "ab".repeat(16) }),
    );
    const session = await client.login("ada", "pw");
    expect(session.sessionId).toBe("ab".repeat(16));
    expect(session.login).toBe("ada");
    expect(calls[0]?.url).toBe("http://test/api/login");
    expect(calls[0]?.body).toEqual({ login: "ada", password: "pw" });
    // no token yet on the login request itself
    expect(calls[0]?.headers["X-Session-Id"]).toBeUndefined();
  });

  it("subsequent requests carry X-Session-Id", async () => {
    const { client, calls } = stubClient((r) =>
      r.url.endsWith("/api/login")
        ? jsonResponse({ sessionId: "f".repeat(32) })
        : jsonResponse({ chronicles: [] }),
    );
    await client.login("ada", "pw");
    await client.chronicles();
    expect(calls[1]?.headers["X-Session-Id"]).toBe("f".repeat(32));
  });

  it("logout posts then always clears the session", async () => {
    const { client } = stubClient((r) =>
      r.url.endsWith("/api/login")
        ? jsonResponse({ sessionId: "f".repeat(32) })
        : jsonResponse({ ok: true }),
    );
    await client.login("ada", "pw");
    await client.logout();
    expect(client.session).toBeNull();
  });

  it("401 with an active session fires onAuthExpired and drops it", async () => {
    const { client } = stubClient((r) =>
      r.url.endsWith("/api/login")
        ? jsonResponse({ sessionId: "f".repeat(32) })
        : jsonResponse(
            { detail: { error: "AuthFailure", message: "expired", line: null, column: null } },
            401,
          ),
    );
    const expired = vi.fn();
    client.onAuthExpired = expired;
    await client.login("ada", "pw");
    await expect(client.chronicles()).rejects.toBeInstanceOf(ApiError);
    expect(expired).toHaveBeenCalledTimes(1);
    expect(client.session).toBeNull();
  });

  it("401 on the login attempt itself does not fire onAuthExpired", async () => {
    const { client } = stubClient(() =>
      jsonResponse(
        { detail: { error: "AuthFailure", message: "bad password", line: null, column: null } },
        401,
      ),
    );
    const expired = vi.fn();
    client.onAuthExpired = expired;
    await expect(client.login("ada", "nope")).rejects.toMatchObject({
      status: 401,
    });
    expect(expired).not.toHaveBeenCalled();
  });
});

describe("execute", () => {
  it("sends script, chronicle and assignment in the body", async () => {
    const { client, calls } = stubClient(() =>
      jsonResponse({
        ok: true,
        final: "3/0",
        created: [],
        bindings: {},
        published: null,
        repair: null,
      }),
    );
    client.session = { sessionId: "s", login: "ada", baseUrl: "http://test" };
    await client.execute("val n = 1", {
      chronicle: "lib",
      assignment: { "ada:base": 1 },
    });
    expect(calls[0]?.body).toEqual({
      script: "val n = 1",
      chronicle: "lib",
      assignment: { "ada:base": 1 },
    });
  });

  it("ascii mode becomes a query flag, not a body field", async () => {
    const { client, calls } = stubClient(() =>
      jsonResponse({
        ok: true,
        final: "3/0",
        created: [],
        bindings: {},
        published: null,
        repair: null,
      }),
    );
    client.session = { sessionId: "s", login: "ada", baseUrl: "http://test" };
    await client.execute("val n = 1", { ascii: true });
    expect(calls[0]?.url).toBe("http://test/api/execute?ascii=1");
    expect(calls[0]?.body).not.toHaveProperty("ascii");
  });

  it("422 surfaces the structured detail", async () => {
    const { client } = stubClient(() =>
      jsonResponse(
        {
          detail: {
            error: "GuardMismatch",
            message: "not derivable here",
            line: 3,
            column: 1,
          },
        },
        422,
      ),
    );
    client.session = { sessionId: "s", login: "ada", baseUrl: "http://test" };
    let caught: ApiError | null = null;
    try {
      await client.execute("have 'x'");
    } catch (e) {
      caught = e as ApiError;
    }
    expect(caught?.status).toBe(422);
    expect(caught?.detail?.error).toBe("GuardMismatch");
    expect(caught?.detail?.line).toBe(3);
  });
});

describe("route contract", () => {
  it("every path the client can build matches a documented route", async () => {
    const { client } = stubClient((r) => {
      if (r.url.endsWith("/api/login"))
        return jsonResponse({ sessionId: "f".repeat(32) });
      if (r.url.includes("/api/chronicles"))
        return jsonResponse({ chronicles: [] });
      return jsonResponse({ ok: true, chronicles: [], regenerated: [], failed: [], checked: 0 });
    });
    await client.createUser("ada", "pw");
    await client.login("ada", "pw");
    await client.execute("val n = 1", { ascii: true });
    await client.chronicles();
    await client.chronicle("ada", "lib");
    await client.version("ada", "lib", 2);
    await client.context("7/3", true);
    await client.repair();
    await client.logout();
    const log = client.requestLog();
    expect(log.length).toBeGreaterThanOrEqual(9);
    for (const entry of log) {
      expect(
        matchesRoute(entry.method, entry.path),
        `${entry.method} ${entry.path}`,
      ).toBe(true);
    }
    // and the documented table is exactly the nine known endpoints
    expect(ROUTES.length).toBe(9);
  });

  it("matchesRoute rejects undocumented endpoints", () => {
    expect(matchesRoute("GET", "/api/theorem/3")).toBe(false);
    expect(matchesRoute("DELETE", "/api/chronicles")).toBe(false);
    expect(matchesRoute("GET", "/api/chronicle/a/b/c/d")).toBe(false);
    expect(matchesRoute("POST", "/api/execute")).toBe(true);
    expect(matchesRoute("POST", "/api/execute?ascii=1")).toBe(true);
  });

  it("context refs split into the two path segments", async () => {
    const { client, calls } = stubClient(() =>
      jsonResponse({
        ref: "7/3",
        kind: "fix",
        parent: "7/2",
        owner: "ada",
        depth: 4,
        constants: [],
        assumptions: [],
        bindings: {},
        masked: [],
      }),
    );
    client.session = { sessionId: "s", login: "ada", baseUrl: "http://test" };
    const doc = await client.context("7/3");
    expect(calls[0]?.url).toBe("http://test/api/context/7/3");
    expect(doc.kind).toBe("fix");
  });
});
