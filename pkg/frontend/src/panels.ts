// Side-panel editors: node editing, edge editing, and snapshot management.
// Every mutation renders from the server response — never optimistically.

import type { ApiClient, WordEdge, WordNode } from "./api.js";
import { escapeHtml } from "./text.js";

function splitTags(raw: string): string[] {
  return raw
    .split(",")
    .map((t) => t.trim())
    .filter((t) => t.length > 0);
}

export class NodeEditPanel {
  constructor(
    private root: HTMLElement,
    private api: ApiClient,
    private onChanged?: () => void,
  ) {}

  render(node: WordNode): void {
    this.root.innerHTML = `
      <h3>Edit word</h3>
      <label>Word <input class="edit-word" value="${escapeHtml(node.word)}"></label>
      <label>Annotation <textarea class="edit-annotation">${escapeHtml(node.annotation)}</textarea></label>
      <label>Tags <input class="edit-tags" value="${escapeHtml(node.tags.join(", "))}"></label>
      <div class="node-stats">Clicks: ${node.click_count} · Language: ${escapeHtml(node.language)}</div>
      <button class="save-node" type="button">Save</button>
      <button class="delete-node" type="button">Delete word</button>
      <p class="status"></p>`;
    this.root.querySelector(".save-node")!.addEventListener("click", () => {
      void this.save(node.id);
    });
    this.root.querySelector(".delete-node")!.addEventListener("click", () => {
      void this.remove(node.id);
    });
  }

  private async save(id: string): Promise<void> {
    const status = this.root.querySelector(".status")!;
    try {
      const updated = await this.api.patchNode(id, {
        word: this.root.querySelector<HTMLInputElement>(".edit-word")!.value,
        annotation: this.root.querySelector<HTMLTextAreaElement>(".edit-annotation")!.value,
        tags: splitTags(this.root.querySelector<HTMLInputElement>(".edit-tags")!.value),
      });
      this.render(updated);
      this.root.querySelector(".status")!.textContent = "Saved.";
      this.onChanged?.();
    } catch (error) {
      status.textContent = error instanceof Error ? error.message : String(error);
    }
  }

  private async remove(id: string): Promise<void> {
    await this.api.deleteElement(id);
    this.root.innerHTML = `<p class="status">Word deleted.</p>`;
    this.onChanged?.();
  }
}

export class EdgeEditPanel {
  constructor(
    private root: HTMLElement,
    private api: ApiClient,
    private onChanged?: () => void,
  ) {}

  render(edge: WordEdge): void {
    this.root.innerHTML = `
      <h3>Edit connection</h3>
      <label>Label <input class="edit-label" value="${escapeHtml(edge.label)}"></label>
      <label>Description <textarea class="edit-description">${escapeHtml(edge.description)}</textarea></label>
      <label>Tags <input class="edit-edge-tags" value="${escapeHtml(edge.tags.join(", "))}"></label>
      <button class="save-edge" type="button">Save</button>
      <button class="delete-edge" type="button">Delete connection</button>
      <p class="status"></p>`;
    this.root.querySelector(".save-edge")!.addEventListener("click", () => {
      void this.save(edge.id);
    });
    this.root.querySelector(".delete-edge")!.addEventListener("click", () => {
      void this.remove(edge.id);
    });
  }

  private async save(id: string): Promise<void> {
    const status = this.root.querySelector(".status")!;
    try {
      const updated = await this.api.patchEdge(id, {
        label: this.root.querySelector<HTMLInputElement>(".edit-label")!.value,
        description: this.root.querySelector<HTMLTextAreaElement>(".edit-description")!.value,
        tags: splitTags(this.root.querySelector<HTMLInputElement>(".edit-edge-tags")!.value),
      });
      this.render(updated);
      this.root.querySelector(".status")!.textContent = "Saved.";
      this.onChanged?.();
    } catch (error) {
      status.textContent = error instanceof Error ? error.message : String(error);
    }
  }

  private async remove(id: string): Promise<void> {
    await this.api.deleteElement(id);
    this.root.innerHTML = `<p class="status">Connection deleted.</p>`;
    this.onChanged?.();
  }
}

export class SnapshotPanel {
  constructor(
    private root: HTMLElement,
    private api: ApiClient,
    private onRestored?: () => void,
  ) {}

  async render(): Promise<void> {
    const { snapshots } = await this.api.snapshots();
    const rows = snapshots.map(
      (name) => `
      <li>
        <span class="snapshot-name">${escapeHtml(name)}</span>
        <button class="restore-snapshot" data-name="${escapeHtml(name)}" type="button">Restore</button>
      </li>`,
    );
    this.root.innerHTML = `
      <h3>Snapshots</h3>
      <ul class="snapshot-list">${rows.join("")}</ul>
      <label>New snapshot <input class="snapshot-new-name"></label>
      <button class="create-snapshot" type="button">Save snapshot</button>
      <p class="status"></p>`;
    this.root.querySelector(".create-snapshot")!.addEventListener("click", () => {
      void this.create();
    });
    for (const button of this.root.querySelectorAll<HTMLButtonElement>(".restore-snapshot")) {
      button.addEventListener("click", () => {
        void this.restore(button.dataset.name!);
      });
    }
  }

  private async create(): Promise<void> {
    const status = this.root.querySelector(".status")!;
    const name = this.root.querySelector<HTMLInputElement>(".snapshot-new-name")!.value.trim();
    try {
      await this.api.createSnapshot(name);
      await this.render();
    } catch (error) {
      status.textContent = error instanceof Error ? error.message : String(error);
    }
  }

  private async restore(name: string): Promise<void> {
    const status = this.root.querySelector(".status")!;
    try {
      await this.api.restoreSnapshot(name);
      await this.render();
      this.onRestored?.();
    } catch (error) {
      status.textContent = error instanceof Error ? error.message : String(error);
    }
  }
}
