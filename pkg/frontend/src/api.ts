/** Typed fetch wrapper over the server's documented HTTP surface.
 *
 * Every request the client can emit is logged and checked against ROUTES,
 * so a method that reached for an undocumented endpoint would fail the
 * contract test rather than silently depending on server internals.  All
 * reasoning about proofs stays on the server; this module only moves JSON.
 */

export interface ClientSession {
  sessionId: string;
  login: string;
  baseUrl: string;
}

export interface ErrorDetail {
  error: string;
  message: string;
  line: number | null;
  column: number | null;
}

export interface PublishedInfo {
  owner: string;
  name: string;
  version: number;
}

export interface RepairReport {
  regenerated: { owner: string; name: string }[];
  failed: { owner: string; name: string; error: string }[];
  checked: number;
}

export interface ExecuteReport {
  ok: boolean;
  final: string;
  created: string[];
  bindings: Record<string, string>;
  published: PublishedInfo | null;
  repair: RepairReport | null;
}

export interface ChronicleRow {
  owner: string;
  name: string;
  status: "upToDate" | "outOfDate";
  failed: boolean;
  versions: number;
  newest: number | null;
}

export interface VersionDoc {
  id: number;
  final: string;
  owned: string[];
  script: string;
  assignment: Record<string, number>;
  dependencies: string[];
}

export interface ChronicleDoc {
  owner: string;
  name: string;
  status: "upToDate" | "outOfDate";
  failed: boolean;
  versions: VersionDoc[];
}

export interface ContextDoc {
  ref: string;
  kind: string;
  parent: string | null;
  owner: string;
  depth: number;
  constants: { name: string; type: string }[];
  assumptions: string[];
  bindings: Record<string, string>;
  masked: string[];
}

export interface ExecuteOptions {
  chronicle?: string | null;
  assignment?: Record<string, number> | null;
  ascii?: boolean;
}

/** Method and path template of every endpoint the client may call. */
export const ROUTES: readonly (readonly [string, string])[] = [
  ["POST", "/api/login"],
  ["POST", "/api/logout"],
  ["POST", "/api/user"],
  ["POST", "/api/execute"],
  ["GET", "/api/context/{key}/{index}"],
  ["GET", "/api/chronicles"],
  ["GET", "/api/chronicle/{owner}/{name}"],
  ["GET", "/api/chronicle/{owner}/{name}/{version}"],
  ["POST", "/api/repair"],
];

/** True when a concrete request line is covered by a ROUTES template. */
export function matchesRoute(method: string, path: string): boolean {
  const bare = path.split("?")[0] ?? path;
  return ROUTES.some(([m, template]) => {
    if (m !== method) return false;
    const pattern = "^" + template.replace(/\{[^}]+\}/g, "[^/]+") + "$";
    return new RegExp(pattern).test(bare);
  });
}

export class ApiError extends Error {
  status: number;
  detail: ErrorDetail | null;

  constructor(status: number, detail: ErrorDetail | string) {
    super(typeof detail === "string" ? detail : detail.message);
    this.name = "ApiError";
    this.status = status;
    this.detail = typeof detail === "string" ? null : detail;
  }
}

export interface RequestLogEntry {
  method: string;
  path: string;
}

type FetchLike = (url: string, init?: RequestInit) => Promise<Response>;

export class ApiClient {
  session: ClientSession | null = null;
  /** Invoked when the server rejects an established session (expiry). */
  onAuthExpired: (() => void) | null = null;

  private baseUrl: string;
  private fetchImpl: FetchLike;
  private log: RequestLogEntry[] = [];

  constructor(baseUrl = "", fetchImpl?: FetchLike) {
    this.baseUrl = baseUrl.replace(/\/$/, "");
    // bind so a bare global fetch keeps its expected receiver
    this.fetchImpl = fetchImpl ?? ((url, init) => fetch(url, init));
  }

  /** Every request line emitted so far, for the route-contract test. */
  requestLog(): readonly RequestLogEntry[] {
    return this.log;
  }

  private async request<T>(
    method: string,
    path: string,
    body?: unknown,
    query = "",
  ): Promise<T> {
    this.log.push({ method, path: path + query });
    const headers: Record<string, string> = {};
    if (body !== undefined) headers["Content-Type"] = "application/json";
    if (this.session) headers["X-Session-Id"] = this.session.sessionId;
    const hadSession = this.session !== null;
    const resp = await this.fetchImpl(this.baseUrl + path + query, {
      method,
      headers,
      body: body === undefined ? undefined : JSON.stringify(body),
    });
    if (!resp.ok) {
      let detail: ErrorDetail | string;
      try {
        const parsed = (await resp.json()) as { detail?: ErrorDetail | string };
        detail = parsed.detail ?? resp.statusText;
      } catch {
        detail = resp.statusText;
      }
      if (resp.status === 401 && hadSession) {
        // the stored token is no longer honoured, drop it and tell the app
        this.session = null;
        if (this.onAuthExpired) this.onAuthExpired();
      }
      throw new ApiError(resp.status, detail);
    }
    return (await resp.json()) as T;
  }

  async createUser(login: string, password: string): Promise<void> {
    await this.request("POST", "/api/user", { login, password });
  }

  async login(login: string, password: string): Promise<ClientSession> {
    const out = await this.request<{ sessionId: string }>(
      "POST",
      "/api/login",
      { login, password },
    );
    this.session = { sessionId: out.sessionId, login, baseUrl: this.baseUrl };
    return this.session;
  }

  async logout(): Promise<void> {
    try {
      await this.request("POST", "/api/logout");
    } finally {
      this.session = null;
    }
  }

  async execute(script: string, opts: ExecuteOptions = {}): Promise<ExecuteReport> {
    const query = opts.ascii ? "?ascii=1" : "";
    return this.request<ExecuteReport>(
      "POST",
      "/api/execute",
      {
        script,
        chronicle: opts.chronicle ?? null,
        assignment: opts.assignment ?? null,
      },
      query,
    );
  }

  async chronicles(): Promise<ChronicleRow[]> {
    const out = await this.request<{ chronicles: ChronicleRow[] }>(
      "GET",
      "/api/chronicles",
    );
    return out.chronicles;
  }

  async chronicle(owner: string, name: string): Promise<ChronicleDoc> {
    const path = `/api/chronicle/${encodeURIComponent(owner)}/${encodeURIComponent(name)}`;
    return this.request<ChronicleDoc>("GET", path);
  }

  /** Same document shape as chronicle() but with a single version entry. */
  async version(owner: string, name: string, version: number): Promise<ChronicleDoc> {
    const path =
      `/api/chronicle/${encodeURIComponent(owner)}` +
      `/${encodeURIComponent(name)}/${version}`;
    return this.request<ChronicleDoc>("GET", path);
  }

  // refs look like "entity/index"; the two halves become path segments
  async context(ref: string, ascii = false): Promise<ContextDoc> {
    const slash = ref.indexOf("/");
    const key = slash < 0 ? ref : ref.slice(0, slash);
    const index = slash < 0 ? "0" : ref.slice(slash + 1);
    return this.request<ContextDoc>(
      "GET",
      `/api/context/${encodeURIComponent(key)}/${encodeURIComponent(index)}`,
      undefined,
      ascii ? "?ascii=1" : "",
    );
  }

  async repair(): Promise<RepairReport> {
    return this.request<RepairReport>("POST", "/api/repair");
  }
}
