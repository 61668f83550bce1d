import { describe, expect, it } from "vitest";
import { escapeHtml, highlightScript } from "../src/highlight.js";

describe("escapeHtml", () => {
  it("neutralises markup characters", () => {
    expect(escapeHtml(`<b a="1">&`)).toBe("&lt;b a=&quot;1&quot;&gt;&amp;");
  });

  it("leaves ordinary text alone", () => {
    expect(escapeHtml("fix p : prop")).toBe("fix p : prop");
  });
});

describe("highlightScript", () => {
  it("wraps keywords", () => {
    const html = highlightScript("val n = 1");
    expect(html).toContain(`<span class="hl-kw">val</span>`);
    expect(html).toContain(`<span class="hl-num">1</span>`);
  });

  it("keeps non-keyword identifiers plain", () => {
    const html = highlightScript("val value = 1");
    // "value" starts with "val" but is its own identifier
    expect(html).toContain("value");
    expect(html).not.toContain(`<span class="hl-kw">value</span>`);
  });

  it("marks string and term literals differently", () => {
    const html = highlightScript(`fix "p : prop"` + "\n" + `have 'p' by h`);
    expect(html).toContain(`<span class="hl-str">&quot;p : prop&quot;</span>`);
    expect(html).toContain(`<span class="hl-term">'p'</span>`);
  });

  it("keywords inside literals are not highlighted", () => {
    const html = highlightScript(`val s = "if then else"`);
    expect(html).toContain(`<span class="hl-str">&quot;if then else&quot;</span>`);
    // only the single leading val keyword span
    expect(html.match(/hl-kw/g)?.length).toBe(1);
  });

  it("comments run to end of line", () => {
    const html = highlightScript("val n = 1 // if while\nval m = 2");
    expect(html).toContain(`<span class="hl-comment">// if while</span>`);
    expect(html.match(/hl-kw/g)?.length).toBe(2);
  });

  it("chronicle references get their own span", () => {
    const html = highlightScript("val c = @ada:lib");
    expect(html).toContain(`<span class="hl-ref">@ada:lib</span>`);
  });

  it("escapes html inside scripts", () => {
    const html = highlightScript(`val s = "<script>"`);
    expect(html).not.toContain("<script>");
    expect(html).toContain("&lt;script&gt;");
  });

  it("survives unterminated literals", () => {
    expect(() => highlightScript(`val s = "oops`)).not.toThrow();
    expect(() => highlightScript(`have 'p`)).not.toThrow();
  });
});
