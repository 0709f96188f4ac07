// Application shell: wires the graph canvas, search, tag highlighting, and
// the side panel's modes (edit, expansion, quiz, snapshots, document view).

import { ApiClient, type WordNode } from "./api.js";
import { DocView } from "./docView.js";
import { ExpansionPanel } from "./expansionPanel.js";
import { GraphView } from "./graphView.js";
import { NodeEditPanel, EdgeEditPanel, SnapshotPanel } from "./panels.js";
import { QuizPanel } from "./quizPanel.js";
import { Tooltip } from "./tooltip.js";

export function bootstrap(doc: Document = document): void {
  const api = new ApiClient("");
  const canvasHost = doc.getElementById("canvas")!;
  const panelHost = doc.getElementById("panel-body")!;
  const statusLine = doc.getElementById("status-line")!;
  const tooltip = new Tooltip(doc.body);

  let focusedNode: WordNode | null = null;
  const radius = 1;

  const graphView = new GraphView(canvasHost, {
    onNodeClick: (node) => {
      void focusNode(node, true);
    },
    onNodeHover: (node, x, y) => tooltip.show(node.annotation, node.tags, x, y),
    onEdgeHover: (edge, x, y) => {
      tooltip.show(edge.description, edge.tags, x, y);
      edgePanel.render(edge);
    },
    onHoverEnd: () => tooltip.hide(),
  });

  const nodePanel = new NodeEditPanel(panelHost, api, refresh);
  const edgePanel = new EdgeEditPanel(panelHost, api, refresh);
  const expansionPanel = new ExpansionPanel(panelHost, api, refresh);
  const quizPanel = new QuizPanel(panelHost, api, refresh);
  const snapshotPanel = new SnapshotPanel(panelHost, api, refresh);
  const docView = new DocView(panelHost, api);

  // One click increment per user click event — never on plain refreshes.
  async function focusNode(node: WordNode, userClick: boolean): Promise<void> {
    if (userClick) await api.click(node.id);
    focusedNode = node;
    const subgraph = await api.subgraph(node.id, radius);
    graphView.render(subgraph, node.id);
    nodePanel.render(subgraph.nodes.find((n) => n.id === node.id) ?? node);
    statusLine.textContent = `Focused on "${node.word}" (${node.language})`;
  }

  function refresh(): void {
    if (focusedNode) {
      api
        .subgraph(focusedNode.id, radius)
        .then((subgraph) => graphView.render(subgraph, focusedNode!.id))
        .catch(() => {
          focusedNode = null;
          graphView.render({ nodes: [], edges: [], hyper_edges: [] });
        });
    }
  }

  doc.getElementById("search-form")!.addEventListener("submit", (event) => {
    event.preventDefault();
    const word = (doc.getElementById("search-word") as HTMLInputElement).value;
    const language = (doc.getElementById("search-language") as HTMLInputElement).value;
    void (async () => {
      const { id } = await api.find(word, language);
      if (id === null) {
        statusLine.textContent = `"${word}" (${language}) is not in your vocabulary.`;
        return;
      }
      const subgraph = await api.subgraph(id, radius);
      const node = subgraph.nodes.find((n) => n.id === id)!;
      await focusNode(node, true);
    })();
  });

  doc.getElementById("tag-form")!.addEventListener("submit", (event) => {
    event.preventDefault();
    const tag = (doc.getElementById("tag-input") as HTMLInputElement).value.trim();
    void (async () => {
      if (!tag) {
        graphView.setHighlighted([]);
        return;
      }
      const { node_ids } = await api.nodesWithTag(tag);
      graphView.setHighlighted(node_ids);
      statusLine.textContent = `${node_ids.length} word(s) tagged "${tag}".`;
    })();
  });

  doc.getElementById("btn-expand")!.addEventListener("click", () => {
    if (!focusedNode) {
      statusLine.textContent = "Focus a word before expanding.";
      return;
    }
    const langs = (doc.getElementById("expand-languages") as HTMLInputElement).value;
    const targets = langs
      .split(",")
      .map((l) => l.trim())
      .filter(Boolean);
    void expansionPanel.open(focusedNode.id, targets.length ? targets : [focusedNode.language]);
  });

  doc.getElementById("btn-quiz")!.addEventListener("click", () => {
    void quizPanel.start(3, 2);
  });

  doc.getElementById("btn-snapshots")!.addEventListener("click", () => {
    void snapshotPanel.render();
  });

  doc.getElementById("doc-form")!.addEventListener("submit", (event) => {
    event.preventDefault();
    const id = (doc.getElementById("doc-id") as HTMLInputElement).value.trim();
    if (id) void docView.open(id);
  });

  doc.getElementById("add-form")!.addEventListener("submit", (event) => {
    event.preventDefault();
    const word = (doc.getElementById("add-word") as HTMLInputElement).value;
    const language = (doc.getElementById("add-language") as HTMLInputElement).value;
    void (async () => {
      try {
        const node = await api.addNode(word, language);
        await focusNode(node, false);
        statusLine.textContent = `Added "${node.word}" (${node.language}).`;
      } catch (error) {
        statusLine.textContent = error instanceof Error ? error.message : String(error);
      }
    })();
  });
}

if (typeof document !== "undefined" && document.getElementById("canvas")) {
  bootstrap();
}
