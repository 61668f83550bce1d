/** Pure HTML-string views over server documents.
 *
 * Everything here takes JSON the server produced and returns markup; no
 * state, no fetching, no interpretation of proofs.  Keeping these pure makes
 * them trivially testable without a DOM.
 */

import type {
  ChronicleDoc,
  ChronicleRow,
  ContextDoc,
  ErrorDetail,
  ExecuteReport,
  VersionDoc,
} from "./api.js";
import { escapeHtml, highlightScript } from "./highlight.js";

function esc(s: string): string {
  return escapeHtml(s);
}

export function statusBadge(status: string, failed: boolean): string {
  const cls = status === "upToDate" ? "up" : "out";
  const label = status === "upToDate" ? "up to date" : "out of date";
  let html = `<span class="badge ${cls}">${label}</span>`;
  if (failed) html += `<span class="badge fail">regeneration failed</span>`;
  return html;
}

export function renderBindings(bindings: Record<string, string>): string {
  const names = Object.keys(bindings);
  if (names.length === 0) return `<p class="muted">no new bindings</p>`;
  const rows = names
    .map(
      (n) =>
        `<tr><td class="bind-name">${esc(n)}</td>` +
        `<td class="bind-value">${esc(bindings[n] ?? "")}</td></tr>`,
    )
    .join("");
  return `<table class="bindings">${rows}</table>`;
}

export function renderReport(report: ExecuteReport): string {
  const parts: string[] = [];
  if (report.published) {
    const p = report.published;
    parts.push(
      `<div class="banner ok">published ${esc(p.owner)}:${esc(p.name)}` +
        ` version ${p.version}</div>`,
    );
  }
  parts.push(renderBindings(report.bindings));
  parts.push(
    `<p class="muted">final context ` +
      `<a href="#" class="ctx-link" data-ref="${esc(report.final)}">${esc(report.final)}</a>` +
      `, created ${report.created.length} context(s)</p>`,
  );
  if (report.repair) {
    const r = report.repair;
    parts.push(
      `<p class="muted">repair: checked ${r.checked}, ` +
        `regenerated ${r.regenerated.length}, failed ${r.failed.length}</p>`,
    );
    for (const f of r.failed) {
      parts.push(
        `<div class="banner warn">${esc(f.owner)}:${esc(f.name)} ` +
          `failed to regenerate: ${esc(f.error)}</div>`,
      );
    }
  }
  return parts.join("\n");
}

/** Error card plus the script with the failing line marked, when known. */
export function renderError(detail: ErrorDetail, script?: string): string {
  const where =
    detail.line !== null
      ? ` <span class="err-pos">line ${detail.line}` +
        (detail.column !== null ? `, column ${detail.column}` : "") +
        `</span>`
      : "";
  let html =
    `<div class="banner err">error [${esc(detail.error)}]${where}: ` +
    `${esc(detail.message)}</div>`;
  if (script !== undefined && detail.line !== null) {
    const lines = script.split("\n");
    const body = lines
      .map((text, idx) => {
        const no = idx + 1;
        const cls = no === detail.line ? ` class="error-line"` : "";
        return `<tr${cls}><td class="lineno">${no}</td>` +
          `<td class="line">${highlightScript(text)}</td></tr>`;
      })
      .join("");
    html += `<table class="script-lines">${body}</table>`;
  }
  return html;
}

export function renderChronicleList(rows: ChronicleRow[]): string {
  if (rows.length === 0) return `<p class="muted">no chronicles yet</p>`;
  const body = rows
    .map(
      (r) =>
        `<tr><td><a href="#" class="chr-link" data-owner="${esc(r.owner)}" ` +
        `data-name="${esc(r.name)}">${esc(r.owner)}:${esc(r.name)}</a></td>` +
        `<td>${statusBadge(r.status, r.failed)}</td>` +
        `<td>${r.versions} version(s)</td>` +
        `<td>${r.newest === null ? "" : "newest v" + r.newest}</td></tr>`,
    )
    .join("");
  return `<table class="chronicles">${body}</table>`;
}

export function renderVersion(v: VersionDoc): string {
  const deps =
    v.dependencies.length === 0
      ? `<span class="muted">none</span>`
      : v.dependencies.map((d) => esc(d)).join(", ");
  const pins = Object.entries(v.assignment)
    .map(([k, vid]) => `${esc(k)} = v${vid}`)
    .join(", ");
  return (
    `<div class="version"><h4>version ${v.id}</h4>` +
    `<p>final context <a href="#" class="ctx-link" data-ref="${esc(v.final)}">` +
    `${esc(v.final)}</a></p>` +
    `<p>dependencies: ${deps}</p>` +
    (pins ? `<p>pinned: ${pins}</p>` : "") +
    `<pre class="script">${highlightScript(v.script)}</pre></div>`
  );
}

export function renderChronicle(doc: ChronicleDoc): string {
  const head =
    `<h3>${esc(doc.owner)}:${esc(doc.name)} ` +
    `${statusBadge(doc.status, doc.failed)}</h3>`;
  return head + doc.versions.map(renderVersion).join("\n");
}

export function renderContext(doc: ContextDoc): string {
  const parts: string[] = [];
  parts.push(
    `<h3>context ${esc(doc.ref)} <span class="badge kind">${esc(doc.kind)}</span></h3>`,
  );
  parts.push(`<p>owner ${esc(doc.owner)}, depth ${doc.depth}</p>`);
  if (doc.parent !== null) {
    parts.push(
      `<p>parent <a href="#" class="ctx-link" data-ref="${esc(doc.parent)}">` +
        `${esc(doc.parent)}</a></p>`,
    );
  } else {
    parts.push(`<p class="muted">root context, no parent</p>`);
  }
  if (doc.constants.length > 0) {
    const rows = doc.constants
      .map((c) => `<li><code>${esc(c.name)} : ${esc(c.type)}</code></li>`)
      .join("");
    parts.push(`<h4>constants</h4><ul>${rows}</ul>`);
  }
  if (doc.assumptions.length > 0) {
    const rows = doc.assumptions
      .map((a) => `<li><code>${esc(a)}</code></li>`)
      .join("");
    parts.push(`<h4>assumptions</h4><ul>${rows}</ul>`);
  }
  if (Object.keys(doc.bindings).length > 0) {
    parts.push(`<h4>bindings</h4>` + renderBindings(doc.bindings));
  }
  if (doc.masked.length > 0) {
    parts.push(
      `<p class="muted">masked: ${doc.masked.map(esc).join(", ")}</p>`,
    );
  }
  return parts.join("\n");
}

export function notFoundCard(what: string): string {
  return `<div class="card not-found"><h3>not found</h3>` +
    `<p>${esc(what)} does not exist on this server.</p></div>`;
}
