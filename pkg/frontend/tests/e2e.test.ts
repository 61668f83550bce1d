/** End-to-end flow against a real spawned server process.
 *
 * The suite drives the same ApiClient the page uses, over real HTTP, and
 * feeds the live documents through the renderers to check the badge
 * lifecycle a user would see: publish, depend, break the dependency,
 * out-of-date.
 */

import { spawn, type ChildProcess } from "node:child_process";
import { dirname, join } from "node:path";
import { fileURLToPath } from "node:url";
import { afterAll, beforeAll, describe, expect, it } from "vitest";
import { ApiClient, ApiError, matchesRoute } from "../src/api.js";
import { renderChronicleList, renderContext, renderReport } from "../src/render.js";

const HERE = dirname(fileURLToPath(import.meta.url));
const FRONTEND_DIR = join(HERE, "..");

const IMPL_SRC = [
  "have impl = '∀ x : prop. x ⟶ x' by",
  "begin",
  '  fix "x : prop"',
  "  assume h = 'x'",
  "  have 'x' by h",
  "end",
].join("\n");

let child: ChildProcess | null = null;
let base = "";
let client: ApiClient;

beforeAll(async () => {
  const script = join(HERE, "spawn_server.py");
  child = spawn("python3", [script, FRONTEND_DIR], {
    stdio: ["ignore", "pipe", "pipe"],
  });
  const port = await new Promise<number>((resolve, reject) => {
    let out = "";
    let err = "";
    const timer = setTimeout(
      () => reject(new Error(`server did not start:\n${out}\n${err}`)),
      60_000,
    );
    child!.stdout!.on("data", (chunk: Buffer) => {
      out += chunk.toString();
      const m = /PORT=(\d+)/.exec(out);
      if (m) {
        clearTimeout(timer);
        resolve(Number(m[1]));
      }
    });
    child!.stderr!.on("data", (chunk: Buffer) => {
      err += chunk.toString();
    });
    child!.on("exit", (code) => {
      clearTimeout(timer);
      reject(new Error(`server exited with ${code}:\n${out}\n${err}`));
    });
  });
  base = `http://127.0.0.1:${port}`;
  client = new ApiClient(base);
});

afterAll(() => {
  child?.kill();
});

describe("live server", () => {
  it("serves the page itself", async () => {
    const resp = await fetch(base + "/");
    expect(resp.status).toBe(200);
    const text = await resp.text();
    expect(text).toContain("peerhol proof console");
  });

  it("rejects api calls without a session", async () => {
    const resp = await fetch(base + "/api/chronicles");
    expect(resp.status).toBe(401);
  });

  it("join, log in, prove the implication", async () => {
    await client.createUser("webuser", "secret");
    const session = await client.login("webuser", "secret");
    expect(session.sessionId).toMatch(/^[0-9a-f]{32}$/);

    const report = await client.execute(IMPL_SRC);
    expect(report.ok).toBe(true);
    // the printer draws bound names from its own pool, so x prints as p
    expect(report.bindings["impl"]).toBe("⊢ ∀ p : prop. p ⟶ p");
    const html = renderReport(report);
    expect(html).toContain("⊢ ∀ p : prop. p ⟶ p");
  });

  it("ascii rendering is pure ascii", async () => {
    const report = await client.execute(IMPL_SRC, { ascii: true });
    const impl = report.bindings["impl"] ?? "";
    expect(impl).toBe("|- _all p : prop. p --> p");
    for (const ch of impl) expect(ch.charCodeAt(0)).toBeLessThan(128);
  });

  it("script errors carry class and position", async () => {
    const bad = "fix \"p : prop\"\nassume h = 'p'\nhave 'p ∧ p' by h";
    let caught: ApiError | null = null;
    try {
      await client.execute(bad);
    } catch (e) {
      caught = e as ApiError;
    }
    expect(caught?.status).toBe(422);
    expect(caught?.detail?.error).toBe("GuardMismatch");
    expect(caught?.detail?.line).toBe(3);
  });

  it("publish, depend, break: the badge lifecycle", async () => {
    const basePub = await client.execute("let marker = 1", {
      chronicle: "base",
    });
    expect(basePub.published).toEqual({
      owner: "webuser",
      name: "base",
      version: 1,
    });

    const appPub = await client.execute("val c = @base\nval x = c.marker", {
      chronicle: "app",
    });
    expect(appPub.published?.version).toBe(1);

    let rows = await client.chronicles();
    let app = rows.find((r) => r.owner === "webuser" && r.name === "app");
    expect(app?.status).toBe("upToDate");
    expect(app?.failed).toBe(false);
    expect(renderChronicleList(rows)).toContain(`class="badge up"`);

    // base v2 drops the name app depends on, so regeneration must fail
    const rePub = await client.execute("let other = 2", { chronicle: "base" });
    expect(rePub.published?.version).toBe(2);
    expect(rePub.repair?.failed.map((f) => `${f.owner}:${f.name}`)).toContain(
      "webuser:app",
    );

    rows = await client.chronicles();
    app = rows.find((r) => r.owner === "webuser" && r.name === "app");
    expect(app?.status).toBe("outOfDate");
    expect(app?.failed).toBe(true);
    const html = renderChronicleList(rows);
    expect(html).toContain(`class="badge out"`);
    expect(html).toContain("regeneration failed");
  });

  it("chronicle and version documents round-trip", async () => {
    const doc = await client.chronicle("webuser", "base");
    expect(doc.versions.map((v) => v.id)).toEqual([2, 1]);

    const single = await client.version("webuser", "base", 1);
    expect(single.versions).toHaveLength(1);
    expect(single.versions[0]?.script).toBe("let marker = 1");

    const appDoc = await client.chronicle("webuser", "app");
    expect(appDoc.versions[0]?.dependencies).toEqual(["webuser:base:1"]);
  });

  it("context documents render and link to their parents", async () => {
    const doc = await client.chronicle("webuser", "base");
    const final = doc.versions[0]?.final ?? "";
    const ctx = await client.context(final);
    expect(ctx.ref).toBe(final);
    expect(ctx.bindings).toHaveProperty("other");
    const html = renderContext(ctx);
    expect(html).toContain(`context ${final}`);
    expect(html).toContain("other");

    // walk up: every context has a parent until the root
    let cur = ctx;
    for (let hops = 0; cur.parent !== null && hops < 50; hops += 1) {
      cur = await client.context(cur.parent);
    }
    expect(cur.parent).toBeNull();
    expect(cur.kind).toBe("root");
  });

  it("missing documents are 404, not errors in disguise", async () => {
    await expect(client.chronicle("nobody", "nothing")).rejects.toMatchObject({
      status: 404,
    });
    await expect(client.context("999999/0")).rejects.toMatchObject({
      status: 404,
    });
  });

  it("a dead token drops the client back to unauthenticated", async () => {
    const other = new ApiClient(base);
    let expired = 0;
    other.onAuthExpired = () => {
      expired += 1;
    };
    other.session = {
      sessionId: "0".repeat(32),
      login: "webuser",
      baseUrl: base,
    };
    await expect(other.chronicles()).rejects.toMatchObject({ status: 401 });
    expect(expired).toBe(1);
    expect(other.session).toBeNull();
  });

  it("every request this suite made used a documented route", () => {
    const log = client.requestLog();
    expect(log.length).toBeGreaterThan(10);
    for (const entry of log) {
      expect(
        matchesRoute(entry.method, entry.path),
        `${entry.method} ${entry.path}`,
      ).toBe(true);
    }
  });
});
