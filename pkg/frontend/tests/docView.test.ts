import { describe, expect, it } from "vitest";
import { highlightDocument } from "../src/docView.js";

function markCount(html: string): number {
  return (html.match(/<mark class="doc-highlight">/g) ?? []).length;
}

describe("highlightDocument", () => {
  it("highlights every member word occurrence in a story", () => {
    const story = "The gato chased the perro while the pájaro watched.";
    const html = highlightDocument(story, ["gato", "perro", "pájaro"]);
    expect(markCount(html)).toBe(3);
    expect(html).toContain('<mark class="doc-highlight">gato</mark>');
    expect(html).toContain('<mark class="doc-highlight">pájaro</mark>');
  });

  it("matches after normalization (case and composed accents)", () => {
    const html = highlightDocument("GATO and café here", ["Gato", "café"]);
    expect(markCount(html)).toBe(2);
  });

  it("leaves absent member words silent and non-member words untouched", () => {
    const html = highlightDocument("just some common words", ["gato"]);
    expect(markCount(html)).toBe(0);
    expect(html).toContain("common words");
  });

  it("escapes the surrounding text", () => {
    const html = highlightDocument("<b>gato</b>", ["gato"]);
    expect(html).not.toContain("<b>");
    expect(html).toContain("&lt;b&gt;");
    expect(markCount(html)).toBe(1);
  });
});
