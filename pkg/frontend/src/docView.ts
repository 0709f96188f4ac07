// Hyper-edge document view: the stored document with every member word
// highlighted wherever it occurs, using the same normalization as the server
// (so case, width-preserving accents, and stray whitespace don't matter).
// Matching is scoped to member words only — ordinary text that merely looks
// like a word stays unhighlighted unless that word is a member.

import type { ApiClient } from "./api.js";
import { escapeHtml, normalizeWord } from "./text.js";

const TOKEN = /[\p{L}\p{M}\p{N}][\p{L}\p{M}\p{N}'’-]*/gu;

export function highlightDocument(text: string, memberWords: string[]): string {
  const members = new Set(memberWords.map(normalizeWord));
  let html = "";
  let cursor = 0;
  for (const match of text.matchAll(TOKEN)) {
    const start = match.index ?? 0;
    html += escapeHtml(text.slice(cursor, start));
    const token = match[0];
    html += members.has(normalizeWord(token))
      ? `<mark class="doc-highlight">${escapeHtml(token)}</mark>`
      : escapeHtml(token);
    cursor = start + token.length;
  }
  html += escapeHtml(text.slice(cursor));
  return html.replace(/\n/g, "<br>");
}

export class DocView {
  constructor(private root: HTMLElement, private api: ApiClient) {}

  async open(hyperEdgeId: string): Promise<void> {
    this.root.innerHTML = `<p class="status">Loading document…</p>`;
    const doc = await this.api.hyperEdgeDocument(hyperEdgeId);
    const header = `
      <div class="doc-meta">
        <span class="doc-type">${escapeHtml(doc.doc_type)}</span>
        <span class="doc-id">${escapeHtml(doc.id)}</span>
        <span class="doc-words">${doc.words.map((w) => escapeHtml(w)).join(", ")}</span>
      </div>`;
    const body =
      doc.document === null
        ? `<p class="doc-missing">Document file is unavailable.</p>`
        : `<div class="doc-body">${highlightDocument(doc.document, doc.words)}</div>`;
    this.root.innerHTML = header + body;
  }
}
