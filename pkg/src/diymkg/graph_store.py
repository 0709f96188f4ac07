"""The multilingual vocabulary knowledge graph.

Nodes are words (one per normalized surface form + language), edges are
undirected annotated links between word pairs, hyper-edges tie a set of words
to a local document. The whole graph persists as one pretty-printed JSON file
that users may hand-edit; loading validates referential integrity instead of
silently repairing.

All mutations are serialized through one re-entrant lock (single logical
writer). When constructed with ``autosave=True`` every mutation is written
through to ``<data_dir>/graph.json`` before it returns; a failed write rolls
the in-memory state back.
"""

from __future__ import annotations

import copy
import json
import re
import threading
from collections import deque
from contextlib import contextmanager
from dataclasses import dataclass, field
from datetime import datetime, timezone
from pathlib import Path

from .errors import (
    DuplicateEdge,
    DuplicateSnapshotName,
    DuplicateWord,
    EmptyWord,
    IntegrityError,
    IoError,
    NotFound,
    ParseError,
    SchemaVersionMismatch,
    SelfLoop,
    TooFewNodes,
)
from .textnorm import normalize, normalize_language

SCHEMA_VERSION = 1

DOC_TYPES = ("quiz", "story", "note")

_ID_RE = re.compile(r"^([neh])(\d+)$")


def _now() -> str:
    return datetime.now(timezone.utc).isoformat()


@dataclass
class WordNode:
    id: str
    word: str
    language: str
    annotation: str = ""
    tags: set[str] = field(default_factory=set)
    click_count: int = 0
    used_for_expansion: bool = False
    created_at: str = ""
    updated_at: str = ""

    def to_dict(self) -> dict:
        return {
            "id": self.id,
            "word": self.word,
            "language": self.language,
            "annotation": self.annotation,
            "tags": sorted(self.tags),
            "click_count": self.click_count,
            "used_for_expansion": self.used_for_expansion,
            "created_at": self.created_at,
            "updated_at": self.updated_at,
        }


@dataclass
class WordEdge:
    id: str
    source: str
    target: str
    label: str = ""
    tags: set[str] = field(default_factory=set)
    description: str = ""

    def to_dict(self) -> dict:
        return {
            "id": self.id,
            "source": self.source,
            "target": self.target,
            "label": self.label,
            "tags": sorted(self.tags),
            "description": self.description,
        }


@dataclass
class HyperEdgeDoc:
    id: str
    node_ids: set[str]
    doc_type: str
    document_ref: str
    created_at: str = ""

    def to_dict(self) -> dict:
        return {
            "id": self.id,
            "node_ids": sorted(self.node_ids),
            "doc_type": self.doc_type,
            "document_ref": self.document_ref,
            "created_at": self.created_at,
        }


@dataclass
class RemovalReport:
    nodes: list[str] = field(default_factory=list)
    edges: list[str] = field(default_factory=list)
    hyper_edges: list[str] = field(default_factory=list)
    modified_hyper_edges: list[str] = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "nodes": self.nodes,
            "edges": self.edges,
            "hyper_edges": self.hyper_edges,
            "modified_hyper_edges": self.modified_hyper_edges,
        }


@dataclass
class Subgraph:
    nodes: list[WordNode]
    edges: list[WordEdge]
    hyper_edges: list[HyperEdgeDoc]

    def to_dict(self) -> dict:
        return {
            "nodes": [n.to_dict() for n in self.nodes],
            "edges": [e.to_dict() for e in self.edges],
            "hyper_edges": [h.to_dict() for h in self.hyper_edges],
        }


class GraphStore:
    def __init__(self, data_dir: str | Path | None = None, autosave: bool = False):
        self.data_dir = Path(data_dir) if data_dir else None
        self.autosave = autosave and self.data_dir is not None
        self._lock = threading.RLock()
        self._in_txn = False
        self._nodes: dict[str, WordNode] = {}
        self._edges: dict[str, WordEdge] = {}
        self._hyper_edges: dict[str, HyperEdgeDoc] = {}
        self._word_index: dict[tuple[str, str], str] = {}
        self._pair_index: dict[frozenset, str] = {}
        self._next_id = {"n": 1, "e": 1, "h": 1}
        if self.data_dir is not None:
            self.data_dir.mkdir(parents=True, exist_ok=True)
            if self.graph_path.exists():
                self._replace_state(_read_graph_file(self.graph_path))

    # --- paths ---

    @property
    def graph_path(self) -> Path:
        if self.data_dir is None:
            raise IoError("store has no data directory")
        return self.data_dir / "graph.json"

    @property
    def snapshots_dir(self) -> Path:
        if self.data_dir is None:
            raise IoError("store has no data directory")
        return self.data_dir / "snapshots"

    # --- id generation ---

    def _gen_id(self, kind: str) -> str:
        n = self._next_id[kind]
        self._next_id[kind] = n + 1
        return f"{kind}{n:08d}"

    # --- mutation plumbing ---

    @contextmanager
    def _mutating(self):
        """Serialize a mutation; with autosave, write through or roll back."""
        with self._lock:
            if self._in_txn or not self.autosave:
                yield
                return
            backup = self._state_copy()
            try:
                yield
            except Exception:
                raise
            try:
                self.save()
            except IoError:
                self._restore_copy(backup)
                raise

    @contextmanager
    def transaction(self):
        """Group several mutations into one all-or-nothing unit."""
        with self._lock:
            if self._in_txn:
                yield
                return
            backup = self._state_copy()
            self._in_txn = True
            try:
                yield
            except Exception:
                self._restore_copy(backup)
                raise
            finally:
                self._in_txn = False
            if self.autosave:
                try:
                    self.save()
                except IoError:
                    self._restore_copy(backup)
                    raise

    def _state_copy(self):
        return (
            copy.deepcopy(self._nodes),
            copy.deepcopy(self._edges),
            copy.deepcopy(self._hyper_edges),
            dict(self._word_index),
            dict(self._pair_index),
            dict(self._next_id),
        )

    def _restore_copy(self, backup):
        (self._nodes, self._edges, self._hyper_edges,
         self._word_index, self._pair_index, self._next_id) = backup

    # --- node operations ---

    def add_node(self, word: str, language: str, annotation: str = "",
                 tags: set[str] | None = None) -> str:
        language = normalize_language(language)
        key = (normalize(word), language)
        if not key[0]:
            raise EmptyWord("word is empty after normalization")
        with self._mutating():
            if key in self._word_index:
                raise DuplicateWord(f"{word!r} ({language}) already exists")
            node_id = self._gen_id("n")
            now = _now()
            self._nodes[node_id] = WordNode(
                id=node_id, word=word.strip(), language=language,
                annotation=annotation, tags=set(tags or ()),
                created_at=now, updated_at=now,
            )
            self._word_index[key] = node_id
            return node_id

    def edit_node(self, node_id: str, annotation: str | None = None,
                  tags: set[str] | None = None, word: str | None = None) -> WordNode:
        with self._mutating():
            node = self._require_node(node_id)
            if word is not None:
                new_key = (normalize(word), node.language)
                if not new_key[0]:
                    raise EmptyWord("word is empty after normalization")
                old_key = (normalize(node.word), node.language)
                if new_key != old_key and new_key in self._word_index:
                    raise DuplicateWord(f"{word!r} ({node.language}) already exists")
                del self._word_index[old_key]
                self._word_index[new_key] = node_id
                node.word = word.strip()
            if annotation is not None:
                node.annotation = annotation
            if tags is not None:
                node.tags = set(tags)
            node.updated_at = _now()
            return node

    def get_node(self, node_id: str) -> WordNode:
        with self._lock:
            return self._require_node(node_id)

    def find_node(self, word: str, language: str) -> str | None:
        language = normalize_language(language)
        with self._lock:
            return self._word_index.get((normalize(word), language))

    def increment_click(self, node_id: str) -> int:
        with self._mutating():
            node = self._require_node(node_id)
            node.click_count += 1
            return node.click_count

    def lowest_click_nodes(self, k: int,
                           language_filter: set[str] | None = None) -> list[WordNode]:
        if k < 1:
            raise ValueError("k must be >= 1")
        langs = {normalize_language(c) for c in language_filter} if language_filter else None
        with self._lock:
            pool = [n for n in self._nodes.values()
                    if langs is None or n.language in langs]
            pool.sort(key=lambda n: (n.click_count, n.created_at, n.id))
            return pool[:k]

    def nodes_with_tag(self, tag: str) -> set[str]:
        with self._lock:
            return {n.id for n in self._nodes.values() if tag in n.tags}

    def set_used_for_expansion(self, node_id: str, value: bool = True) -> None:
        with self._mutating():
            node = self._require_node(node_id)
            node.used_for_expansion = value

    # --- edge operations ---

    def add_edge(self, source: str, target: str, label: str = "",
                 tags: set[str] | None = None, description: str = "") -> str:
        with self._mutating():
            self._require_node(source)
            self._require_node(target)
            if source == target:
                raise SelfLoop(f"cannot link {source} to itself")
            pair = frozenset((source, target))
            if pair in self._pair_index:
                raise DuplicateEdge(f"{source} and {target} are already linked")
            edge_id = self._gen_id("e")
            self._edges[edge_id] = WordEdge(
                id=edge_id, source=source, target=target, label=label,
                tags=set(tags or ()), description=description,
            )
            self._pair_index[pair] = edge_id
            return edge_id

    def edit_edge(self, edge_id: str, label: str | None = None,
                  tags: set[str] | None = None,
                  description: str | None = None) -> WordEdge:
        with self._mutating():
            edge = self._edges.get(edge_id)
            if edge is None:
                raise NotFound(f"no edge {edge_id}")
            if label is not None:
                edge.label = label
            if tags is not None:
                edge.tags = set(tags)
            if description is not None:
                edge.description = description
            return edge

    def get_edge(self, edge_id: str) -> WordEdge:
        with self._lock:
            edge = self._edges.get(edge_id)
            if edge is None:
                raise NotFound(f"no edge {edge_id}")
            return edge

    def edge_between(self, a: str, b: str) -> str | None:
        with self._lock:
            return self._pair_index.get(frozenset((a, b)))

    # --- hyper-edge operations ---

    def add_hyper_edge(self, node_ids, doc_type: str, document_ref: str) -> str:
        node_ids = set(node_ids)
        if doc_type not in DOC_TYPES:
            raise ParseError(f"unknown doc_type {doc_type!r}")
        with self._mutating():
            for nid in node_ids:
                self._require_node(nid)
            if len(node_ids) < 2:
                raise TooFewNodes("a hyper-edge needs at least 2 nodes")
            he_id = self._gen_id("h")
            self._hyper_edges[he_id] = HyperEdgeDoc(
                id=he_id, node_ids=node_ids, doc_type=doc_type,
                document_ref=document_ref, created_at=_now(),
            )
            return he_id

    def get_hyper_edge(self, he_id: str) -> HyperEdgeDoc:
        with self._lock:
            he = self._hyper_edges.get(he_id)
            if he is None:
                raise NotFound(f"no hyper-edge {he_id}")
            return he

    # --- removal ---

    def remove_element(self, element_id: str) -> RemovalReport:
        with self._mutating():
            report = RemovalReport()
            if element_id in self._nodes:
                self._remove_node(element_id, report)
            elif element_id in self._edges:
                self._remove_edge(element_id, report)
            elif element_id in self._hyper_edges:
                del self._hyper_edges[element_id]
                report.hyper_edges.append(element_id)
            else:
                raise NotFound(f"no element {element_id}")
            return report

    def _remove_node(self, node_id: str, report: RemovalReport) -> None:
        node = self._nodes.pop(node_id)
        del self._word_index[(normalize(node.word), node.language)]
        report.nodes.append(node_id)
        for eid in [e.id for e in self._edges.values()
                    if node_id in (e.source, e.target)]:
            self._remove_edge(eid, report)
        for he in list(self._hyper_edges.values()):
            if node_id in he.node_ids:
                he.node_ids.discard(node_id)
                if len(he.node_ids) < 2:
                    del self._hyper_edges[he.id]
                    report.hyper_edges.append(he.id)
                else:
                    report.modified_hyper_edges.append(he.id)

    def _remove_edge(self, edge_id: str, report: RemovalReport) -> None:
        edge = self._edges.pop(edge_id)
        del self._pair_index[frozenset((edge.source, edge.target))]
        report.edges.append(edge_id)

    # --- queries ---

    def subgraph_of(self, node_id: str, radius: int = 1) -> Subgraph:
        if radius < 1:
            raise ValueError("radius must be >= 1")
        with self._lock:
            self._require_node(node_id)
            adjacency: dict[str, list[str]] = {}
            for e in self._edges.values():
                adjacency.setdefault(e.source, []).append(e.target)
                adjacency.setdefault(e.target, []).append(e.source)
            seen = {node_id}
            frontier = deque([(node_id, 0)])
            while frontier:
                nid, dist = frontier.popleft()
                if dist == radius:
                    continue
                for nb in adjacency.get(nid, ()):
                    if nb not in seen:
                        seen.add(nb)
                        frontier.append((nb, dist + 1))
            nodes = [self._nodes[nid] for nid in sorted(seen)]
            edges = [e for e in self._edges.values()
                     if e.source in seen and e.target in seen]
            hyper = [h for h in self._hyper_edges.values()
                     if h.node_ids <= seen]
            return Subgraph(nodes=nodes, edges=edges, hyper_edges=hyper)

    def node_count(self) -> int:
        with self._lock:
            return len(self._nodes)

    def nodes(self) -> list[WordNode]:
        with self._lock:
            return list(self._nodes.values())

    def has_node(self, node_id: str) -> bool:
        with self._lock:
            return node_id in self._nodes

    # --- serialization ---

    def to_dict(self) -> dict:
        with self._lock:
            return {
                "version": SCHEMA_VERSION,
                "nodes": [n.to_dict() for n in self._nodes.values()],
                "edges": [e.to_dict() for e in self._edges.values()],
                "hyper_edges": [h.to_dict() for h in self._hyper_edges.values()],
            }

    def save(self, path: str | Path | None = None) -> None:
        target = Path(path) if path else self.graph_path
        data = self.to_dict()
        try:
            tmp = target.with_suffix(".json.tmp")
            tmp.write_text(
                json.dumps(data, indent=2, ensure_ascii=False) + "\n",
                encoding="utf-8",
            )
            tmp.replace(target)
        except OSError as exc:
            raise IoError(f"cannot write {target}: {exc}") from exc

    def load(self, path: str | Path) -> None:
        """Replace the live graph with the file's content (validated)."""
        state = _read_graph_file(Path(path))
        with self._mutating():
            self._replace_state(state)

    def _replace_state(self, state: dict) -> None:
        self._nodes = state["nodes"]
        self._edges = state["edges"]
        self._hyper_edges = state["hyper_edges"]
        self._word_index = {
            (normalize(n.word), n.language): n.id for n in self._nodes.values()
        }
        self._pair_index = {
            frozenset((e.source, e.target)): e.id for e in self._edges.values()
        }
        nxt = {"n": 1, "e": 1, "h": 1}
        for coll in (self._nodes, self._edges, self._hyper_edges):
            for eid in coll:
                m = _ID_RE.match(eid)
                if m:
                    nxt[m.group(1)] = max(nxt[m.group(1)], int(m.group(2)) + 1)
        self._next_id = nxt

    # --- snapshots ---

    def snapshot_create(self, name: str) -> Path:
        if not name or "/" in name or "\\" in name or name.startswith("."):
            raise ParseError(f"invalid snapshot name {name!r}")
        with self._lock:
            self.snapshots_dir.mkdir(parents=True, exist_ok=True)
            path = self.snapshots_dir / f"{name}.json"
            if path.exists():
                raise DuplicateSnapshotName(f"snapshot {name!r} already exists")
            self.save(path)
            return path

    def snapshot_restore(self, name: str) -> None:
        with self._lock:
            path = self.snapshots_dir / f"{name}.json"
            if not path.exists():
                raise NotFound(f"no snapshot {name!r}")
            state = _read_graph_file(path)
            stamp = datetime.now(timezone.utc).strftime("%Y%m%dT%H%M%S%f")
            self.snapshot_create(f"pre-restore-{stamp}")
            with self._mutating():
                self._replace_state(state)

    def snapshot_list(self) -> list[str]:
        with self._lock:
            if not self.snapshots_dir.exists():
                return []
            return sorted(p.stem for p in self.snapshots_dir.glob("*.json"))

    # --- internals ---

    def _require_node(self, node_id: str) -> WordNode:
        node = self._nodes.get(node_id)
        if node is None:
            raise NotFound(f"no node {node_id}")
        return node


def _read_graph_file(path: Path) -> dict:
    """Parse and validate a graph file; raise instead of repairing."""
    try:
        raw = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise IoError(f"cannot read {path}: {exc}") from exc
    try:
        data = json.loads(raw)
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path}: {exc}") from exc
    if not isinstance(data, dict):
        raise ParseError(f"{path}: top level is not an object")
    version = data.get("version")
    if version != SCHEMA_VERSION:
        raise SchemaVersionMismatch(
            f"{path}: version {version!r}, expected {SCHEMA_VERSION}")

    nodes: dict[str, WordNode] = {}
    seen_words: set[tuple[str, str]] = set()
    for item in data.get("nodes", []):
        try:
            node = WordNode(
                id=item["id"], word=item["word"],
                language=normalize_language(item["language"]),
                annotation=item.get("annotation", ""),
                tags=set(item.get("tags", [])),
                click_count=int(item.get("click_count", 0)),
                used_for_expansion=bool(item.get("used_for_expansion", False)),
                created_at=item.get("created_at", ""),
                updated_at=item.get("updated_at", ""),
            )
        except (KeyError, TypeError, ValueError) as exc:
            raise ParseError(f"{path}: bad node entry: {exc}") from exc
        if node.id in nodes:
            raise IntegrityError(f"duplicate node id {node.id}")
        if node.click_count < 0:
            raise IntegrityError(f"node {node.id} has negative click_count")
        key = (normalize(node.word), node.language)
        if key in seen_words:
            raise IntegrityError(
                f"node {node.id}: duplicate word {node.word!r} ({node.language})")
        seen_words.add(key)
        nodes[node.id] = node

    edges: dict[str, WordEdge] = {}
    seen_pairs: set[frozenset] = set()
    for item in data.get("edges", []):
        try:
            edge = WordEdge(
                id=item["id"], source=item["source"], target=item["target"],
                label=item.get("label", ""),
                tags=set(item.get("tags", [])),
                description=item.get("description", ""),
            )
        except (KeyError, TypeError) as exc:
            raise ParseError(f"{path}: bad edge entry: {exc}") from exc
        if edge.id in edges or edge.id in nodes:
            raise IntegrityError(f"duplicate id {edge.id}")
        for endpoint in (edge.source, edge.target):
            if endpoint not in nodes:
                raise IntegrityError(
                    f"edge {edge.id} references unknown node {endpoint}")
        if edge.source == edge.target:
            raise IntegrityError(f"edge {edge.id} is a self-loop")
        pair = frozenset((edge.source, edge.target))
        if pair in seen_pairs:
            raise IntegrityError(f"edge {edge.id} duplicates an existing pair")
        seen_pairs.add(pair)
        edges[edge.id] = edge

    hyper_edges: dict[str, HyperEdgeDoc] = {}
    for item in data.get("hyper_edges", []):
        try:
            he = HyperEdgeDoc(
                id=item["id"], node_ids=set(item["node_ids"]),
                doc_type=item["doc_type"],
                document_ref=item.get("document_ref", ""),
                created_at=item.get("created_at", ""),
            )
        except (KeyError, TypeError) as exc:
            raise ParseError(f"{path}: bad hyper-edge entry: {exc}") from exc
        if he.id in hyper_edges or he.id in nodes or he.id in edges:
            raise IntegrityError(f"duplicate id {he.id}")
        if he.doc_type not in DOC_TYPES:
            raise IntegrityError(f"hyper-edge {he.id}: bad doc_type {he.doc_type!r}")
        if len(he.node_ids) < 2:
            raise IntegrityError(f"hyper-edge {he.id} has fewer than 2 nodes")
        for nid in he.node_ids:
            if nid not in nodes:
                raise IntegrityError(
                    f"hyper-edge {he.id} references unknown node {nid}")
        hyper_edges[he.id] = he

    return {"nodes": nodes, "edges": edges, "hyper_edges": hyper_edges}
