// Hover preview: rendered Markdown annotation plus tag chips. Elements with
// nothing to show get no tooltip at all.

import { escapeHtml, renderMarkdown } from "./text.js";

export class Tooltip {
  private el: HTMLDivElement;

  constructor(private container: HTMLElement = document.body) {
    this.el = document.createElement("div");
    this.el.className = "tooltip";
    this.el.style.display = "none";
    this.el.style.position = "absolute";
    container.appendChild(this.el);
  }

  show(annotation: string, tags: string[], x: number, y: number): void {
    if (!annotation.trim() && tags.length === 0) {
      this.hide();
      return;
    }
    const chips = tags
      .map((t) => `<span class="tag-chip">${escapeHtml(t)}</span>`)
      .join(" ");
    this.el.innerHTML =
      (annotation.trim() ? `<div class="tooltip-body">${renderMarkdown(annotation)}</div>` : "") +
      (chips ? `<div class="tooltip-tags">${chips}</div>` : "");
    this.el.style.left = `${x + 12}px`;
    this.el.style.top = `${y + 12}px`;
    this.el.style.display = "block";
  }

  hide(): void {
    this.el.style.display = "none";
    this.el.innerHTML = "";
  }

  get visible(): boolean {
    return this.el.style.display !== "none";
  }

  get element(): HTMLDivElement {
    return this.el;
  }
}
