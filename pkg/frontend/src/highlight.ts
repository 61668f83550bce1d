/** Lightweight syntax colouring for proof scripts.
 *
 * This is presentation only: a small scanner that wraps keywords, string and
 * term literals, comments, numbers and chronicle references in spans.  It
 * never needs to agree with the real parser; on anything unexpected it falls
 * through and emits plain escaped text.
 */

const KEYWORDS = new Set([
  "fix", "assume", "define", "obtain", "have", "let", "unbind", "val",
  "def", "if", "then", "else", "end", "for", "in", "do", "while", "match",
  "case", "with", "begin", "root", "this", "true", "false", "by",
]);

export function escapeHtml(s: string): string {
  return s
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;");
}

function span(cls: string, text: string): string {
  return `<span class="hl-${cls}">${escapeHtml(text)}</span>`;
}

const IDENT_START = /[A-Za-z_]/;
const IDENT_PART = /[A-Za-z0-9_']/;

export function highlightScript(src: string): string {
  const out: string[] = [];
  let i = 0;
  const n = src.length;
  let plain = "";

  const flush = () => {
    if (plain) {
      out.push(escapeHtml(plain));
      plain = "";
    }
  };

  while (i < n) {
    const ch = src[i] as string;

    if (ch === "/" && src[i + 1] === "/") {
      flush();
      let j = i;
      while (j < n && src[j] !== "\n") j += 1;
      out.push(span("comment", src.slice(i, j)));
      i = j;
      continue;
    }

    if (ch === '"') {
      flush();
      let j = i + 1;
      while (j < n && src[j] !== '"' && src[j] !== "\n") {
        if (src[j] === "\\") j += 1;
        j += 1;
      }
      if (src[j] === '"') j += 1;
      out.push(span("str", src.slice(i, j)));
      i = j;
      continue;
    }

    // term literals: single quotes, no escapes inside
    if (ch === "'") {
      flush();
      let j = i + 1;
      while (j < n && src[j] !== "'" && src[j] !== "\n") j += 1;
      if (src[j] === "'") j += 1;
      out.push(span("term", src.slice(i, j)));
      i = j;
      continue;
    }

    if (ch === "@") {
      flush();
      let j = i + 1;
      while (j < n && /[A-Za-z0-9_:]/.test(src[j] as string)) j += 1;
      out.push(span("ref", src.slice(i, j)));
      i = j;
      continue;
    }

    if (/[0-9]/.test(ch)) {
      flush();
      let j = i;
      while (j < n && /[0-9]/.test(src[j] as string)) j += 1;
      out.push(span("num", src.slice(i, j)));
      i = j;
      continue;
    }

    if (IDENT_START.test(ch)) {
      let j = i;
      while (j < n && IDENT_PART.test(src[j] as string)) j += 1;
      const word = src.slice(i, j);
      if (KEYWORDS.has(word)) {
        flush();
        out.push(span("kw", word));
      } else {
        plain += word;
      }
      i = j;
      continue;
    }

    plain += ch;
    i += 1;
  }
  flush();
  return out.join("");
}
