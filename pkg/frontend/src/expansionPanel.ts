// Expansion dialog: candidate checkboxes (nothing preselected), already-known
// candidates visibly marked, and a confirm button that commits ONLY the
// checked items. Suggested words can never enter the graph without an
// explicit checkbox plus confirm.

import type { ApiClient, Candidate, CommitReport } from "./api.js";
import { escapeHtml } from "./text.js";

export class ExpansionPanel {
  private candidates: Candidate[] = [];
  private chosenNode: string | null = null;

  constructor(
    private root: HTMLElement,
    private api: ApiClient,
    private onCommitted?: (report: CommitReport) => void,
  ) {}

  async open(chosenNode: string, targetLanguages: string[], maxCandidates = 10): Promise<void> {
    this.chosenNode = chosenNode;
    this.root.innerHTML = `<p class="status">Asking for suggestions…</p>`;
    try {
      const { candidates } = await this.api.expand(chosenNode, targetLanguages, maxCandidates);
      this.candidates = candidates;
      this.renderList();
    } catch (error) {
      this.renderFailure(chosenNode, targetLanguages, maxCandidates, error);
    }
  }

  private renderFailure(
    chosenNode: string, targetLanguages: string[], maxCandidates: number, error: unknown,
  ): void {
    const message = error instanceof Error ? error.message : String(error);
    this.root.innerHTML = `
      <p class="status error">Suggestion request failed: ${escapeHtml(message)}</p>
      <button class="retry-expand" type="button">Retry</button>`;
    this.root.querySelector(".retry-expand")!.addEventListener("click", () =>
      this.open(chosenNode, targetLanguages, maxCandidates));
  }

  private renderList(): void {
    const rows = this.candidates.map((candidate, i) => `
      <li class="candidate${candidate.already_known ? " already-known" : ""}">
        <label>
          <input type="checkbox" class="candidate-check" data-index="${i}">
          <span class="candidate-word">${escapeHtml(candidate.word)}</span>
          <span class="candidate-lang">${escapeHtml(candidate.language)}</span>
          <span class="candidate-relation">${escapeHtml(candidate.relation)}</span>
          ${candidate.already_known ? `<span class="known-badge">already known</span>` : ""}
        </label>
        ${candidate.gloss ? `<div class="candidate-gloss">${escapeHtml(candidate.gloss)}</div>` : ""}
      </li>`);
    this.root.innerHTML = `
      <ul class="candidate-list">${rows.join("")}</ul>
      <button class="confirm-expand" type="button">Confirm selection</button>
      <p class="status"></p>`;
    this.root.querySelector(".confirm-expand")!.addEventListener("click", () => {
      void this.confirm();
    });
  }

  selectedCandidates(): Candidate[] {
    const boxes = this.root.querySelectorAll<HTMLInputElement>(".candidate-check");
    const selected: Candidate[] = [];
    boxes.forEach((box) => {
      if (box.checked) selected.push(this.candidates[Number(box.dataset.index)]);
    });
    return selected;
  }

  async confirm(): Promise<CommitReport> {
    if (this.chosenNode === null) throw new Error("expansion dialog is not open");
    const report = await this.api.commitExpansion(this.chosenNode, this.selectedCandidates());
    const status = this.root.querySelector(".status");
    if (status) {
      status.textContent =
        `Added ${report.created_nodes.length} word(s), ` +
        `${report.created_edges.length} connection(s).`;
    }
    this.onCommitted?.(report);
    return report;
  }
}
