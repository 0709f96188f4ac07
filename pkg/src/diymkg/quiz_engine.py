"""Quiz generation, grading, flagging, and persistence.

Quizzes target the least-clicked words. Questions come from the LLM in a
JSON batch; anything structurally invalid (wrong option count, answer not an
option, missing/extra blank) is regenerated up to a retry budget and dropped
if still bad, so a returned quiz always satisfies the question invariants.
Grading is a pure string match after normalization; no LLM involved.
"""

from __future__ import annotations

import json
import uuid
from dataclasses import dataclass, field
from datetime import datetime, timezone
from pathlib import Path

from .errors import (
    EmptyGraph,
    GenerationFailed,
    IndexOutOfRange,
    IoError,
    LengthMismatch,
    MalformedOutput,
    NotGraded,
)
from .graph_store import GraphStore, WordNode
from .llm_gateway import LlmGateway, LlmTask
from .textnorm import normalize

BLANK = "____"
MCQ_OPTIONS = 4

normalize_answer = normalize


@dataclass
class QuizQuestion:
    index: int
    kind: str  # "mcq" | "fib"
    target_node: str
    target_word: str
    prompt_text: str
    options: list[str]
    correct_answer: str

    def to_dict(self) -> dict:
        return {
            "index": self.index,
            "kind": self.kind,
            "target_node": self.target_node,
            "target_word": self.target_word,
            "prompt_text": self.prompt_text,
            "options": self.options,
            "correct_answer": self.correct_answer,
        }


@dataclass
class Quiz:
    quiz_id: str
    generated_at: str
    model_name: str
    questions: list[QuizQuestion]
    warnings: list[str] = field(default_factory=list)


@dataclass
class QuizResult:
    quiz_id: str
    user_answers: list[str]
    is_correct: list[bool]
    flagged: list[bool]
    completed_at: str
    graded: bool = True


def _validate_question(kind: str, item: dict) -> tuple[str, list[str], str] | None:
    """Return (prompt, options, answer) if the item is structurally valid."""
    if not isinstance(item, dict):
        return None
    prompt = item.get("question")
    answer = item.get("answer")
    if not isinstance(prompt, str) or not isinstance(answer, str):
        return None
    if not prompt.strip() or not answer.strip():
        return None
    if kind == "mcq":
        options = item.get("options")
        if not isinstance(options, list) or len(options) != MCQ_OPTIONS:
            return None
        if not all(isinstance(o, str) and o.strip() for o in options):
            return None
        if len({normalize(o) for o in options}) != MCQ_OPTIONS:
            return None
        if answer not in options:
            return None
        return prompt, list(options), answer
    # fib
    if prompt.count(BLANK) != 1:
        return None
    return prompt, [], answer


def _generate_for(gateway: LlmGateway, kind: str,
                  nodes: list[WordNode]) -> dict[str, dict]:
    """One batch call; returns valid items keyed by normalized target word."""
    template_id = "gen_mcq" if kind == "mcq" else "gen_fib"
    words_payload = json.dumps(
        [{"word": n.word, "language": n.language} for n in nodes],
        ensure_ascii=False,
    )
    task = LlmTask(template_id=template_id,
                   variables={"words": words_payload},
                   expects="json_array")
    result = gateway.complete_structured(task)

    wanted = {normalize(n.word): n for n in nodes}
    out: dict[str, dict] = {}
    unmatched = [n for n in nodes]
    for item in result.value:
        if not isinstance(item, dict):
            continue
        target = normalize(str(item.get("target_word", "")))
        if target in wanted and target not in out:
            out[target] = item
            unmatched = [n for n in unmatched if normalize(n.word) != target]
        elif unmatched:
            # models sometimes mangle target_word; fall back to batch order
            node = unmatched.pop(0)
            out.setdefault(normalize(node.word), item)
    return out


def generate_questions(gateway: LlmGateway, kind: str, nodes: list[WordNode],
                       retry_budget: int = 2,
                       warnings: list[str] | None = None) -> list[QuizQuestion]:
    """Generate one valid question per node, retrying invalid ones.

    Nodes whose questions stay invalid after the retry budget are dropped
    (noted in ``warnings``). Every returned question satisfies the structural
    invariants checked by ``_validate_question``.
    """
    if warnings is None:
        warnings = []
    pending = list(nodes)
    valid: dict[str, QuizQuestion] = {}
    for _ in range(retry_budget + 1):
        if not pending:
            break
        try:
            items = _generate_for(gateway, kind, pending)
        except MalformedOutput as exc:
            warnings.append(f"{kind} generation failed: {exc}")
            break
        still_bad = []
        for node in pending:
            item = items.get(normalize(node.word))
            checked = _validate_question(kind, item) if item else None
            if checked is None:
                still_bad.append(node)
                continue
            prompt, options, answer = checked
            valid[node.id] = QuizQuestion(
                index=-1, kind=kind, target_node=node.id,
                target_word=node.word, prompt_text=prompt,
                options=options, correct_answer=answer,
            )
        pending = still_bad
    if pending:
        warnings.append(
            f"dropped {len(pending)} {kind} question(s) after retries: "
            + ", ".join(n.word for n in pending))
    return [valid[n.id] for n in nodes if n.id in valid]


def build_quiz(store: GraphStore, gateway: LlmGateway, n_mcq: int = 2,
               n_fib: int = 3, language_filter: set[str] | None = None,
               retry_budget: int = 2) -> Quiz:
    if n_mcq < 0 or n_fib < 0 or n_mcq + n_fib < 1:
        raise ValueError("need at least one question")
    total = n_mcq + n_fib
    targets = store.lowest_click_nodes(total, language_filter)
    if not targets:
        raise EmptyGraph("no words to quiz on")

    # fewer nodes than questions: fill MCQ slots first, then FIB
    mcq_targets = targets[:min(n_mcq, len(targets))]
    fib_targets = targets[len(mcq_targets):total]

    warnings: list[str] = []
    questions: list[QuizQuestion] = []
    for kind, nodes in (("mcq", mcq_targets), ("fib", fib_targets)):
        if nodes:
            questions.extend(
                generate_questions(gateway, kind, nodes, retry_budget, warnings))

    if not questions:
        raise GenerationFailed("no structurally valid questions were generated")
    for i, q in enumerate(questions):
        q.index = i
    return Quiz(
        quiz_id=f"quiz-{uuid.uuid4().hex[:12]}",
        generated_at=datetime.now(timezone.utc).isoformat(),
        model_name=gateway.config.model_name,
        questions=questions,
        warnings=warnings,
    )


def grade_quiz(quiz: Quiz, answers: list[str]) -> QuizResult:
    if len(answers) != len(quiz.questions):
        raise LengthMismatch(
            f"{len(answers)} answers for {len(quiz.questions)} questions")
    is_correct = [
        normalize_answer(a) == normalize_answer(q.correct_answer)
        for q, a in zip(quiz.questions, answers)
    ]
    return QuizResult(
        quiz_id=quiz.quiz_id,
        user_answers=list(answers),
        is_correct=is_correct,
        flagged=[False] * len(answers),
        completed_at=datetime.now(timezone.utc).isoformat(),
    )


def flag_question(result: QuizResult, index: int, flagged: bool) -> QuizResult:
    if not result.graded:
        raise NotGraded("flags can only be set after grading")
    if not 0 <= index < len(result.flagged):
        raise IndexOutOfRange(f"no question at index {index}")
    result.flagged[index] = flagged
    return result


def quiz_document(quiz: Quiz, result: QuizResult) -> dict:
    return {
        "quiz_id": quiz.quiz_id,
        "generated_at": quiz.generated_at,
        "model": quiz.model_name,
        "questions": [
            {
                "index": q.index,
                "kind": q.kind,
                "target_word": q.target_word,
                "prompt_text": q.prompt_text,
                "options": q.options,
                "correct_answer": q.correct_answer,
                "user_answer": result.user_answers[q.index],
                "is_correct": result.is_correct[q.index],
                "flagged": result.flagged[q.index],
            }
            for q in quiz.questions
        ],
    }


def persist_quiz_result(store: GraphStore, quiz: Quiz, result: QuizResult,
                        data_dir: str | Path) -> tuple[str, str | None, str | None]:
    """Write the quiz document and link its words with a hyper-edge.

    Returns (document path relative to data_dir, hyper-edge id or None,
    warning or None).
    """
    if not result.graded:
        raise NotGraded("persist requires a graded result")
    data_dir = Path(data_dir)
    rel = f"quizzes/{quiz.quiz_id}.json"
    path = data_dir / rel
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(
            json.dumps(quiz_document(quiz, result), indent=2, ensure_ascii=False)
            + "\n",
            encoding="utf-8",
        )
    except OSError as exc:
        raise IoError(f"cannot write {path}: {exc}") from exc

    surviving = {q.target_node for q in quiz.questions
                 if store.has_node(q.target_node)}
    if len(surviving) >= 2:
        he_id = store.add_hyper_edge(surviving, "quiz", rel)
        return rel, he_id, None
    return rel, None, "fewer than 2 quiz words remain in the graph; no hyper-edge"
