// Client-side mirror of the server's word/answer normalization: NFC, trim,
// collapse whitespace, lowercase. Used only for display-side matching
// (document highlighting); grading itself always happens server-side.

export function normalizeWord(text: string): string {
  return text.normalize("NFC").trim().replace(/\s+/g, " ").toLowerCase();
}

export function escapeHtml(text: string): string {
  return text
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;");
}

const SAFE_URL = /^https?:\/\//i;

// Minimal Markdown renderer, sanitized by construction: the source is
// HTML-escaped first and only our own tags are introduced afterwards.
// Covers what annotations actually use: bold, italics, inline code, links,
// bullet lists, and paragraphs.
export function renderMarkdown(source: string): string {
  const escaped = escapeHtml(source.normalize("NFC"));
  const blocks = escaped.split(/\n{2,}/);
  const html = blocks.map((block) => {
    const lines = block.split("\n");
    if (lines.every((l) => /^\s*[-*]\s+/.test(l))) {
      const items = lines
        .map((l) => `<li>${inline(l.replace(/^\s*[-*]\s+/, ""))}</li>`)
        .join("");
      return `<ul>${items}</ul>`;
    }
    return `<p>${inline(lines.join("<br>"))}</p>`;
  });
  return html.join("");
}

function inline(text: string): string {
  return text
    .replace(/`([^`]+)`/g, "<code>$1</code>")
    .replace(/\*\*([^*]+)\*\*/g, "<strong>$1</strong>")
    .replace(/\*([^*]+)\*/g, "<em>$1</em>")
    .replace(/\[([^\]]+)\]\(([^)\s]+)\)/g, (match, label, url) =>
      SAFE_URL.test(url)
        ? `<a href="${url}" target="_blank" rel="noopener">${label}</a>`
        : label,
    );
}
