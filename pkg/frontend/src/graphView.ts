// Force-directed SVG rendering of the focused subgraph. The layout is
// cosmetic: a few hundred synchronous spring-relaxation ticks, seeded from
// node ids so re-renders are stable.

import type { Subgraph, WordEdge, WordNode } from "./api.js";

const SVG_NS = "http://www.w3.org/2000/svg";

interface LayoutNode {
  node: WordNode;
  x: number;
  y: number;
  vx: number;
  vy: number;
}

export interface GraphViewCallbacks {
  onNodeClick?: (node: WordNode) => void;
  onNodeHover?: (node: WordNode, x: number, y: number) => void;
  onEdgeHover?: (edge: WordEdge, x: number, y: number) => void;
  onHoverEnd?: () => void;
}

function hash(text: string): number {
  let h = 2166136261;
  for (let i = 0; i < text.length; i++) {
    h = (h ^ text.charCodeAt(i)) * 16777619;
    h >>>= 0;
  }
  return h;
}

export class GraphView {
  private svg: SVGSVGElement;
  private highlighted = new Set<string>();
  private focusedId: string | null = null;
  private current: Subgraph = { nodes: [], edges: [], hyper_edges: [] };

  constructor(
    private container: HTMLElement,
    private callbacks: GraphViewCallbacks = {},
    private width = 760,
    private height = 560,
  ) {
    this.svg = document.createElementNS(SVG_NS, "svg");
    this.svg.setAttribute("viewBox", `0 0 ${width} ${height}`);
    this.svg.classList.add("graph-canvas");
    container.appendChild(this.svg);
  }

  render(subgraph: Subgraph, focusedId: string | null = null): void {
    this.current = subgraph;
    this.focusedId = focusedId;
    const layout = this.layout(subgraph);
    this.svg.innerHTML = "";

    for (const edge of subgraph.edges) {
      const a = layout.get(edge.source);
      const b = layout.get(edge.target);
      if (!a || !b) continue;
      const group = document.createElementNS(SVG_NS, "g");
      group.classList.add("edge");
      group.dataset.edgeId = edge.id;
      const line = document.createElementNS(SVG_NS, "line");
      line.setAttribute("x1", String(a.x));
      line.setAttribute("y1", String(a.y));
      line.setAttribute("x2", String(b.x));
      line.setAttribute("y2", String(b.y));
      group.appendChild(line);
      if (edge.label) {
        const label = document.createElementNS(SVG_NS, "text");
        label.setAttribute("x", String((a.x + b.x) / 2));
        label.setAttribute("y", String((a.y + b.y) / 2 - 4));
        label.classList.add("edge-label");
        label.textContent = edge.label;
        group.appendChild(label);
      }
      group.addEventListener("mousemove", (event) =>
        this.callbacks.onEdgeHover?.(edge, event.clientX, event.clientY));
      group.addEventListener("mouseleave", () => this.callbacks.onHoverEnd?.());
      this.svg.appendChild(group);
    }

    for (const item of layout.values()) {
      const group = document.createElementNS(SVG_NS, "g");
      group.classList.add("node");
      group.dataset.nodeId = item.node.id;
      if (item.node.id === this.focusedId) group.classList.add("focused");
      if (this.highlighted.has(item.node.id)) group.classList.add("tag-highlight");
      const circle = document.createElementNS(SVG_NS, "circle");
      circle.setAttribute("cx", String(item.x));
      circle.setAttribute("cy", String(item.y));
      circle.setAttribute("r", "16");
      const label = document.createElementNS(SVG_NS, "text");
      label.setAttribute("x", String(item.x));
      label.setAttribute("y", String(item.y + 30));
      label.classList.add("node-label");
      label.textContent = item.node.word;
      group.appendChild(circle);
      group.appendChild(label);
      group.addEventListener("click", () => this.callbacks.onNodeClick?.(item.node));
      group.addEventListener("mousemove", (event) =>
        this.callbacks.onNodeHover?.(item.node, event.clientX, event.clientY));
      group.addEventListener("mouseleave", () => this.callbacks.onHoverEnd?.());
      this.svg.appendChild(group);
    }
  }

  // Re-style exactly the given node set (tag highlighting).
  setHighlighted(nodeIds: Iterable<string>): void {
    this.highlighted = new Set(nodeIds);
    for (const group of this.svg.querySelectorAll<SVGGElement>("g.node")) {
      group.classList.toggle(
        "tag-highlight",
        this.highlighted.has(group.dataset.nodeId ?? ""),
      );
    }
  }

  get subgraph(): Subgraph {
    return this.current;
  }

  get element(): SVGSVGElement {
    return this.svg;
  }

  private layout(subgraph: Subgraph): Map<string, LayoutNode> {
    const nodes = new Map<string, LayoutNode>();
    const cx = this.width / 2;
    const cy = this.height / 2;
    subgraph.nodes.forEach((node, i) => {
      const angle = (hash(node.id) % 6283) / 1000;
      const r = node.id === this.focusedId ? 0 : 120 + (hash(node.id) % 80);
      nodes.set(node.id, {
        node,
        x: cx + r * Math.cos(angle + i),
        y: cy + r * Math.sin(angle + i),
        vx: 0,
        vy: 0,
      });
    });
    const edges = subgraph.edges
      .map((e) => [nodes.get(e.source), nodes.get(e.target)])
      .filter((pair): pair is [LayoutNode, LayoutNode] => !!pair[0] && !!pair[1]);

    for (let tick = 0; tick < 200; tick++) {
      for (const a of nodes.values()) {
        for (const b of nodes.values()) {
          if (a === b) continue;
          const dx = a.x - b.x;
          const dy = a.y - b.y;
          const d2 = Math.max(dx * dx + dy * dy, 25);
          const force = 3000 / d2;
          const d = Math.sqrt(d2);
          a.vx += (dx / d) * force;
          a.vy += (dy / d) * force;
        }
        a.vx += (cx - a.x) * 0.005;
        a.vy += (cy - a.y) * 0.005;
      }
      for (const [a, b] of edges) {
        const dx = b.x - a.x;
        const dy = b.y - a.y;
        const d = Math.max(Math.sqrt(dx * dx + dy * dy), 1);
        const force = (d - 110) * 0.02;
        a.vx += (dx / d) * force;
        a.vy += (dy / d) * force;
        b.vx -= (dx / d) * force;
        b.vy -= (dy / d) * force;
      }
      for (const item of nodes.values()) {
        if (item.node.id === this.focusedId) {
          item.x = cx;
          item.y = cy;
          item.vx = item.vy = 0;
          continue;
        }
        item.x = Math.min(this.width - 30, Math.max(30, item.x + item.vx * 0.5));
        item.y = Math.min(this.height - 30, Math.max(30, item.y + item.vy * 0.5));
        item.vx *= 0.6;
        item.vy *= 0.6;
      }
    }
    return nodes;
  }
}
