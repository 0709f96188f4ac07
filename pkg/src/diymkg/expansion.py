"""Vocabulary expansion: LLM suggestions, safe-mode filtering, human commit.

The one safety property everything here preserves: no LLM output enters the
graph unless it passes through ``commit_selection`` with an explicit user
selection.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

from .errors import BatchRejected, MalformedOutput
from .graph_store import GraphStore
from .llm_gateway import LlmGateway, LlmTask
from .textnorm import normalize, normalize_language


@dataclass
class CandidateWord:
    word: str
    language: str
    relation: str = ""
    gloss: str = ""
    already_known: bool = False

    def to_dict(self) -> dict:
        return {
            "word": self.word,
            "language": self.language,
            "relation": self.relation,
            "gloss": self.gloss,
            "already_known": self.already_known,
        }

    @classmethod
    def from_dict(cls, item: dict) -> "CandidateWord":
        return cls(
            word=str(item["word"]),
            language=normalize_language(str(item["language"])),
            relation=str(item.get("relation", "")),
            gloss=str(item.get("gloss", "")),
            already_known=bool(item.get("already_known", False)),
        )


@dataclass
class ExpansionRequest:
    chosen_node: str
    target_languages: set[str]
    template_id: str = "suggest_related"
    max_candidates: int = 10
    safe_mode: bool = False

    def __post_init__(self):
        if self.max_candidates < 1:
            raise ValueError("max_candidates must be >= 1")
        if not self.target_languages:
            raise ValueError("target_languages must be non-empty")
        self.target_languages = {normalize_language(c) for c in self.target_languages}


@dataclass
class CommitReport:
    created_nodes: list[str] = field(default_factory=list)
    created_edges: list[str] = field(default_factory=list)
    skipped: list[dict] = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "created_nodes": self.created_nodes,
            "created_edges": self.created_edges,
            "skipped": self.skipped,
        }


def suggest_related(store: GraphStore, gateway: LlmGateway,
                    req: ExpansionRequest) -> list[CandidateWord]:
    """Query the LLM for related words; never touches the graph."""
    chosen = store.get_node(req.chosen_node)
    task = LlmTask(
        template_id=req.template_id,
        variables={
            "word": chosen.word,
            "language": chosen.language,
            "target_languages": ", ".join(sorted(req.target_languages)),
            "max_candidates": req.max_candidates,
        },
        expects="json_array",
    )
    result = gateway.complete_structured(task)

    chosen_key = (normalize(chosen.word), chosen.language)
    seen: set[tuple[str, str]] = set()
    candidates: list[CandidateWord] = []
    for item in result.value:
        if not isinstance(item, dict) or "word" not in item or "language" not in item:
            continue
        try:
            cand = CandidateWord.from_dict(item)
        except Exception:
            continue
        key = (normalize(cand.word), cand.language)
        if not key[0]:
            continue
        if cand.language not in req.target_languages:
            continue  # models drift languages; drop silently
        if key == chosen_key:
            continue  # self-suggestion
        if key in seen:
            continue
        seen.add(key)
        cand.already_known = store.find_node(cand.word, cand.language) is not None
        candidates.append(cand)
        if len(candidates) == req.max_candidates:
            break

    if req.safe_mode:
        candidates = filter_inappropriate(candidates, gateway)
    return candidates


def filter_inappropriate(candidates: list[CandidateWord],
                         gateway: LlmGateway) -> list[CandidateWord]:
    """One extra LLM pass; fail-closed: unparseable filter rejects the batch."""
    if not candidates:
        return []
    task = LlmTask(
        template_id="filter_safe",
        variables={"candidates": json.dumps([c.word for c in candidates],
                                            ensure_ascii=False)},
        expects="json_array",
    )
    try:
        result = gateway.complete_structured(task)
    except MalformedOutput as exc:
        raise BatchRejected(f"safety filter output unusable: {exc}") from exc
    approved = {normalize(str(w)) for w in result.value if isinstance(w, str)}
    return [c for c in candidates if normalize(c.word) in approved]


def commit_selection(store: GraphStore, chosen_node: str,
                     selected: list[CandidateWord]) -> CommitReport:
    """Add the user-chosen candidates to the graph, all-or-nothing."""
    report = CommitReport()
    with store.transaction():
        store.get_node(chosen_node)
        for cand in selected:
            node_id = store.find_node(cand.word, cand.language)
            if node_id is None:
                node_id = store.add_node(cand.word, cand.language,
                                         annotation=cand.gloss)
                report.created_nodes.append(node_id)
            if node_id == chosen_node:
                report.skipped.append({"word": cand.word, "reason": "self"})
                continue
            if store.edge_between(chosen_node, node_id) is not None:
                report.skipped.append({"word": cand.word,
                                       "reason": "duplicate_edge"})
                continue
            edge_id = store.add_edge(chosen_node, node_id, label=cand.relation)
            report.created_edges.append(edge_id)
    return report


def mark_used_for_expansion(store: GraphStore, node_id: str) -> None:
    store.set_used_for_expansion(node_id, True)
