"""HTTP boundary for the web UI and scripts.

One data directory is the whole user state: ``graph.json``, ``snapshots/``,
``quizzes/``, ``prompts/``. Every mutation is written through to disk before
the response goes out, so stopping the server never loses acknowledged
writes and external edits to the files are picked up on restart.
"""

from __future__ import annotations

from pathlib import Path
from typing import Any

from fastapi import FastAPI, Request
from fastapi.responses import FileResponse, JSONResponse
from pydantic import BaseModel, Field

from . import errors as err
from .expansion import (
    CandidateWord,
    ExpansionRequest,
    commit_selection,
    suggest_related,
)
from .graph_store import GraphStore
from .llm_gateway import LlmBackendConfig, LlmGateway, TemplateRegistry
from .prompts import ensure_prompt_files
from .quiz_engine import (
    Quiz,
    QuizResult,
    build_quiz,
    flag_question,
    grade_quiz,
    persist_quiz_result,
)

ERROR_STATUS = {
    "NotFound": 404,
    "DuplicateWord": 409,
    "DuplicateEdge": 409,
    "DuplicateSnapshotName": 409,
    "EmptyWord": 400,
    "InvalidLanguage": 400,
    "SelfLoop": 400,
    "TooFewNodes": 400,
    "LengthMismatch": 400,
    "IndexOutOfRange": 400,
    "NotGraded": 400,
    "TemplateError": 400,
    "EmptyGraph": 400,
    "ConfigError": 400,
    "ParseError": 400,
    "SchemaVersionMismatch": 400,
    "IntegrityError": 400,
    "TransportError": 502,
    "AuthError": 502,
    "TimeoutError": 502,
    "MalformedOutput": 502,
    "BatchRejected": 502,
    "GenerationFailed": 502,
    "IoError": 500,
}


class NodeIn(BaseModel):
    word: str
    language: str
    annotation: str = ""
    tags: list[str] = Field(default_factory=list)


class NodePatch(BaseModel):
    word: str | None = None
    annotation: str | None = None
    tags: list[str] | None = None


class EdgeIn(BaseModel):
    source: str
    target: str
    label: str = ""
    tags: list[str] = Field(default_factory=list)
    description: str = ""


class EdgePatch(BaseModel):
    label: str | None = None
    tags: list[str] | None = None
    description: str | None = None


class ExpandIn(BaseModel):
    chosen_node: str
    target_languages: list[str]
    template_id: str = "suggest_related"
    max_candidates: int = 10
    safe_mode: bool | None = None


class CandidateIn(BaseModel):
    word: str
    language: str
    relation: str = ""
    gloss: str = ""
    already_known: bool = False


class CommitIn(BaseModel):
    chosen_node: str
    selected: list[CandidateIn] = Field(default_factory=list)


class QuizIn(BaseModel):
    n_mcq: int = 2
    n_fib: int = 3
    language_filter: list[str] | None = None


class GradeIn(BaseModel):
    answers: list[str]


class FlagsIn(BaseModel):
    flags: list[bool]


class SnapshotIn(BaseModel):
    name: str


def create_app(data_dir: str | Path,
               backend_config: LlmBackendConfig | None = None,
               safe_mode: bool = False,
               prompts_dir: str | Path | None = None,
               backend=None) -> FastAPI:
    data_dir = Path(data_dir)
    data_dir.mkdir(parents=True, exist_ok=True)
    if prompts_dir is None:
        prompts_dir = data_dir / "prompts"
    ensure_prompt_files(prompts_dir)

    registry = TemplateRegistry()
    registry.load_dir(prompts_dir)
    config = backend_config or LlmBackendConfig.from_env()
    gateway = LlmGateway(config, registry=registry, backend=backend)
    store = GraphStore(data_dir, autosave=True)

    app = FastAPI(title="diymkg", docs_url=None, redoc_url=None)
    app.state.store = store
    app.state.gateway = gateway
    app.state.safe_mode = safe_mode
    app.state.data_dir = data_dir
    # quizzes pending grading/confirmation, by quiz id
    app.state.quizzes: dict[str, tuple[Quiz, QuizResult | None]] = {}

    @app.exception_handler(err.DiymkgError)
    async def _domain_error(request: Request, exc: err.DiymkgError):
        status = ERROR_STATUS.get(exc.code, 500)
        return JSONResponse(status_code=status,
                            content={"code": exc.code, "message": exc.message})

    # --- graph ---

    @app.get("/api/graph")
    def get_graph() -> dict:
        return store.to_dict()

    @app.post("/api/nodes", status_code=201)
    def post_node(body: NodeIn) -> dict:
        node_id = store.add_node(body.word, body.language,
                                 body.annotation, set(body.tags))
        return store.get_node(node_id).to_dict()

    @app.patch("/api/nodes/{node_id}")
    def patch_node(node_id: str, body: NodePatch) -> dict:
        node = store.edit_node(
            node_id, annotation=body.annotation,
            tags=set(body.tags) if body.tags is not None else None,
            word=body.word,
        )
        return node.to_dict()

    @app.delete("/api/elements/{element_id}")
    def delete_element(element_id: str) -> dict:
        return store.remove_element(element_id).to_dict()

    @app.post("/api/edges", status_code=201)
    def post_edge(body: EdgeIn) -> dict:
        edge_id = store.add_edge(body.source, body.target, body.label,
                                 set(body.tags), body.description)
        return store.get_edge(edge_id).to_dict()

    @app.patch("/api/edges/{edge_id}")
    def patch_edge(edge_id: str, body: EdgePatch) -> dict:
        edge = store.edit_edge(
            edge_id, label=body.label,
            tags=set(body.tags) if body.tags is not None else None,
            description=body.description,
        )
        return edge.to_dict()

    @app.post("/api/nodes/{node_id}/click")
    def post_click(node_id: str) -> dict:
        return {"id": node_id, "click_count": store.increment_click(node_id)}

    @app.get("/api/nodes/{node_id}/subgraph")
    def get_subgraph(node_id: str, radius: int = 1) -> dict:
        if radius < 1:
            raise err.ParseError("radius must be >= 1")
        return store.subgraph_of(node_id, radius).to_dict()

    @app.get("/api/tags/{tag}")
    def get_tag(tag: str) -> dict:
        return {"tag": tag, "node_ids": sorted(store.nodes_with_tag(tag))}

    @app.get("/api/find")
    def get_find(word: str, language: str) -> dict:
        node_id = store.find_node(word, language)
        return {"id": node_id}

    # --- expansion ---

    @app.post("/api/expand")
    def post_expand(body: ExpandIn) -> dict:
        req = ExpansionRequest(
            chosen_node=body.chosen_node,
            target_languages=set(body.target_languages),
            template_id=body.template_id,
            max_candidates=body.max_candidates,
            safe_mode=app.state.safe_mode if body.safe_mode is None else body.safe_mode,
        )
        candidates = suggest_related(store, gateway, req)
        return {"candidates": [c.to_dict() for c in candidates]}

    @app.post("/api/expand/commit")
    def post_commit(body: CommitIn) -> dict:
        selected = [CandidateWord(word=c.word, language=c.language,
                                  relation=c.relation, gloss=c.gloss,
                                  already_known=c.already_known)
                    for c in body.selected]
        return commit_selection(store, body.chosen_node, selected).to_dict()

    # --- quizzes ---

    @app.post("/api/quiz", status_code=201)
    def post_quiz(body: QuizIn) -> dict:
        quiz = build_quiz(
            store, gateway, body.n_mcq, body.n_fib,
            set(body.language_filter) if body.language_filter else None,
        )
        app.state.quizzes[quiz.quiz_id] = (quiz, None)
        # answers stay server-side until grading
        return {
            "quiz_id": quiz.quiz_id,
            "generated_at": quiz.generated_at,
            "model": quiz.model_name,
            "warnings": quiz.warnings,
            "questions": [
                {"index": q.index, "kind": q.kind, "prompt_text": q.prompt_text,
                 "options": q.options}
                for q in quiz.questions
            ],
        }

    def _require_quiz(quiz_id: str) -> tuple[Quiz, QuizResult | None]:
        entry = app.state.quizzes.get(quiz_id)
        if entry is None:
            raise err.NotFound(f"no quiz {quiz_id}")
        return entry

    @app.post("/api/quiz/{quiz_id}/grade")
    def post_grade(quiz_id: str, body: GradeIn) -> dict:
        quiz, _ = _require_quiz(quiz_id)
        result = grade_quiz(quiz, body.answers)
        app.state.quizzes[quiz_id] = (quiz, result)
        return _result_payload(quiz, result)

    @app.post("/api/quiz/{quiz_id}/flags")
    def post_flags(quiz_id: str, body: FlagsIn) -> dict:
        quiz, result = _require_quiz(quiz_id)
        if result is None:
            raise err.NotGraded("grade the quiz before flagging")
        if len(body.flags) != len(quiz.questions):
            raise err.LengthMismatch(
                f"{len(body.flags)} flags for {len(quiz.questions)} questions")
        for i, flagged in enumerate(body.flags):
            flag_question(result, i, flagged)
        return _result_payload(quiz, result)

    @app.post("/api/quiz/{quiz_id}/confirm")
    def post_confirm(quiz_id: str) -> dict:
        quiz, result = _require_quiz(quiz_id)
        if result is None:
            raise err.NotGraded("grade the quiz before confirming")
        rel, he_id, warning = persist_quiz_result(store, quiz, result, data_dir)
        del app.state.quizzes[quiz_id]
        return {"document": rel, "hyper_edge_id": he_id, "warning": warning}

    def _result_payload(quiz: Quiz, result: QuizResult) -> dict:
        return {
            "quiz_id": quiz.quiz_id,
            "questions": [
                {"index": q.index, "kind": q.kind, "prompt_text": q.prompt_text,
                 "options": q.options, "correct_answer": q.correct_answer,
                 "user_answer": result.user_answers[q.index],
                 "is_correct": result.is_correct[q.index],
                 "flagged": result.flagged[q.index]}
                for q in quiz.questions
            ],
        }

    # --- snapshots ---

    @app.get("/api/snapshots")
    def get_snapshots() -> dict:
        return {"snapshots": store.snapshot_list()}

    @app.post("/api/snapshots", status_code=201)
    def post_snapshot(body: SnapshotIn) -> dict:
        store.snapshot_create(body.name)
        return {"name": body.name}

    @app.post("/api/snapshots/{name}/restore")
    def post_restore(name: str) -> dict:
        store.snapshot_restore(name)
        return {"restored": name, "snapshots": store.snapshot_list()}

    # --- hyper-edge documents ---

    @app.get("/api/hyper_edges/{he_id}")
    def get_hyper_edge(he_id: str) -> dict:
        he = store.get_hyper_edge(he_id)
        payload: dict[str, Any] = he.to_dict()
        doc_path = (data_dir / he.document_ref).resolve()
        if data_dir.resolve() not in doc_path.parents:
            raise err.IntegrityError(
                f"document_ref escapes the data directory: {he.document_ref}")
        payload["document"] = (
            doc_path.read_text(encoding="utf-8") if doc_path.exists() else None)
        payload["words"] = [
            store.get_node(nid).word for nid in sorted(he.node_ids)
            if store.has_node(nid)
        ]
        return payload

    # --- static frontend, when built ---

    frontend_dist = Path(__file__).resolve().parents[2] / "frontend" / "dist"

    @app.get("/")
    def index():
        bundle = frontend_dist / "index.html"
        if bundle.exists():
            return FileResponse(bundle)
        return JSONResponse({"service": "diymkg", "api": "/api/graph"})

    _media_types = {".js": "text/javascript", ".css": "text/css", ".html": "text/html"}

    @app.get("/dist/{filename}")
    def dist_file(filename: str):
        target = (frontend_dist / filename).resolve()
        if target.parent != frontend_dist or not target.is_file():
            raise err.NotFound(f"no static file named {filename!r}")
        return FileResponse(target, media_type=_media_types.get(target.suffix))

    return app
