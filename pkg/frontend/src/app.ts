/** Browser proof console.
 *
 * Three views: login, editor, chronicle browser.  The client holds the
 * session token in memory only; a 401 on any call drops back to the login
 * view with a notice.  The editor allows a single in-flight run at a time.
 */

import { ApiClient, ApiError } from "./api.js";
import {
  notFoundCard,
  renderChronicle,
  renderChronicleList,
  renderContext,
  renderError,
  renderReport,
} from "./render.js";

type View = "login" | "editor" | "browser";

export class App {
  private client: ApiClient;
  private root: HTMLElement;
  private running = false;
  private ascii = false;
  private notice = "";
  private lastScript = "";

  constructor(root: HTMLElement, client: ApiClient) {
    this.root = root;
    this.client = client;
    client.onAuthExpired = () => {
      this.notice = "session expired, log in again";
      this.showLogin();
    };
  }

  start(): void {
    this.showLogin();
  }

  private el<T extends HTMLElement>(selector: string): T {
    const found = this.root.querySelector(selector);
    if (!found) throw new Error(`missing element ${selector}`);
    return found as T;
  }

  private frame(view: View, body: string): void {
    const login = this.client.session?.login;
    const nav =
      view === "login"
        ? ""
        : `<nav>
             <span class="who">${login ?? ""}</span>
             <button id="nav-editor">editor</button>
             <button id="nav-browser">chronicles</button>
             <label><input type="checkbox" id="ascii-toggle"${this.ascii ? " checked" : ""}> ascii</label>
             <button id="nav-logout">log out</button>
           </nav>`;
    this.root.innerHTML = `<header><h1>peerhol</h1>${nav}</header>` +
      `<main id="view">${body}</main>`;
    if (view !== "login") {
      this.el("#nav-editor").onclick = () => this.showEditor();
      this.el("#nav-browser").onclick = () => this.showBrowser();
      this.el<HTMLInputElement>("#ascii-toggle").onchange = (ev) => {
        this.ascii = (ev.target as HTMLInputElement).checked;
      };
      this.el("#nav-logout").onclick = () => {
        void this.client.logout().then(() => {
          this.notice = "";
          this.showLogin();
        });
      };
    }
  }

  // ------------------------------------------------------------- login

  showLogin(): void {
    const note = this.notice
      ? `<div class="banner warn">${this.notice}</div>`
      : "";
    this.frame(
      "login",
      `${note}
       <form id="login-form" class="card">
         <label>login <input id="f-login" autocomplete="username"></label>
         <label>password <input id="f-password" type="password"></label>
         <div id="login-error"></div>
         <button id="btn-login" type="submit">log in</button>
         <button id="btn-join" type="button">join</button>
       </form>`,
    );
    const form = this.el<HTMLFormElement>("#login-form");
    form.onsubmit = (ev) => {
      ev.preventDefault();
      void this.doLogin(false);
    };
    this.el("#btn-join").onclick = () => void this.doLogin(true);
  }

  private async doLogin(join: boolean): Promise<void> {
    const login = this.el<HTMLInputElement>("#f-login").value.trim();
    const password = this.el<HTMLInputElement>("#f-password").value;
    const slot = this.el("#login-error");
    slot.innerHTML = "";
    try {
      if (join) await this.client.createUser(login, password);
      await this.client.login(login, password);
      this.notice = "";
      this.showEditor();
    } catch (e) {
      if (e instanceof ApiError) {
        const msg = e.detail?.message ?? e.message;
        slot.innerHTML = `<div class="banner err">${msg}</div>`;
      } else {
        slot.innerHTML = `<div class="banner err">server unreachable</div>`;
      }
    }
  }

  // ------------------------------------------------------------ editor

  showEditor(): void {
    this.frame(
      "editor",
      `<div class="editor card">
         <textarea id="script" rows="14" spellcheck="false"
           placeholder="fix &quot;p : prop&quot;"></textarea>
         <div class="controls">
           <input id="publish-as" placeholder="publish as name (optional)">
           <button id="btn-run">run</button>
         </div>
         <div id="result"></div>
       </div>`,
    );
    this.el<HTMLTextAreaElement>("#script").value = this.lastScript;
    this.el("#btn-run").onclick = () => void this.runScript();
  }

  private async runScript(): Promise<void> {
    if (this.running) return;
    const btn = this.el<HTMLButtonElement>("#btn-run");
    const script = this.el<HTMLTextAreaElement>("#script").value;
    const publish = this.el<HTMLInputElement>("#publish-as").value.trim();
    const slot = this.el("#result");
    this.lastScript = script;
    this.running = true;
    btn.disabled = true;
    slot.innerHTML = `<p class="muted">running...</p>`;
    try {
      const report = await this.client.execute(script, {
        chronicle: publish || null,
        ascii: this.ascii,
      });
      slot.innerHTML = renderReport(report);
      this.wireContextLinks(slot);
    } catch (e) {
      if (e instanceof ApiError && e.detail) {
        slot.innerHTML = renderError(e.detail, script);
      } else if (e instanceof ApiError && e.status === 401) {
        return; // onAuthExpired already switched views
      } else {
        slot.innerHTML = `<div class="banner err">server unreachable</div>`;
      }
    } finally {
      this.running = false;
      if (this.root.contains(btn)) btn.disabled = false;
    }
  }

  // ----------------------------------------------------------- browser

  showBrowser(): void {
    this.frame("browser", `<div id="listing" class="card">loading...</div>`);
    void this.loadChronicles();
  }

  private async loadChronicles(): Promise<void> {
    const slot = this.el("#listing");
    try {
      const rows = await this.client.chronicles();
      slot.innerHTML = renderChronicleList(rows);
      for (const a of slot.querySelectorAll<HTMLElement>("a.chr-link")) {
        a.onclick = (ev) => {
          ev.preventDefault();
          void this.loadChronicle(a.dataset.owner ?? "", a.dataset.name ?? "");
        };
      }
    } catch (e) {
      if (!(e instanceof ApiError && e.status === 401)) {
        slot.innerHTML = `<div class="banner err">server unreachable</div>`;
      }
    }
  }

  private async loadChronicle(owner: string, name: string): Promise<void> {
    const slot = this.el("#listing");
    try {
      const doc = await this.client.chronicle(owner, name);
      slot.innerHTML =
        `<p><a href="#" id="back">back to list</a></p>` + renderChronicle(doc);
      this.el("#back").onclick = (ev) => {
        ev.preventDefault();
        void this.loadChronicles();
      };
      this.wireContextLinks(slot);
    } catch (e) {
      if (e instanceof ApiError && e.status === 404) {
        slot.innerHTML = notFoundCard(`chronicle ${owner}:${name}`);
      }
    }
  }

  private async loadContext(ref: string): Promise<void> {
    const slot = this.el("#listing") ?? this.el("#result");
    try {
      const doc = await this.client.context(ref, this.ascii);
      slot.innerHTML =
        `<p><a href="#" id="back">back to list</a></p>` + renderContext(doc);
      this.el("#back").onclick = (ev) => {
        ev.preventDefault();
        void this.loadChronicles();
      };
      this.wireContextLinks(slot);
    } catch (e) {
      if (e instanceof ApiError && e.status === 404) {
        slot.innerHTML = notFoundCard(`context ${ref}`);
      }
    }
  }

  private wireContextLinks(scope: HTMLElement): void {
    for (const a of scope.querySelectorAll<HTMLElement>("a.ctx-link")) {
      a.onclick = (ev) => {
        ev.preventDefault();
        const ref = a.dataset.ref ?? "";
        // context documents render in the browser view
        if (!this.root.querySelector("#listing")) this.showBrowser();
        void this.loadContext(ref);
      };
    }
  }
}

export function initApp(root: HTMLElement, client: ApiClient): App {
  const app = new App(root, client);
  app.start();
  return app;
}
