"""Evaluation harness: iterative expansion growth curves and quiz judging.

The expansion experiment grows a private in-memory graph from one start word:
each iteration asks for related words in the same language, adds the unseen
ones (with a generated description), marks the current word as used, then
samples the next word uniformly among words not yet used for expansion. One
growth record per iteration; the run stops early when no unused word remains.

The quiz study generates MCQ and fill-in-the-blank questions over sampled
words and has a separate judge model rate each question-answer pair; pairs
the judge cannot rate are excluded from the percentage denominators.
"""

from __future__ import annotations

import csv
import json
import random
import statistics
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable

from .errors import TransportError
from .expansion import ExpansionRequest, suggest_related
from .graph_store import GraphStore
from .llm_gateway import LlmGateway, LlmTask
from .quiz_engine import generate_questions


@dataclass
class ExpansionRunConfig:
    language: str
    start_word: str
    iterations: int = 500
    seed: int = 0
    max_candidates: int = 10
    run_id: str = "run"

    def __post_init__(self):
        if self.iterations < 1:
            raise ValueError("iterations must be >= 1")


@dataclass
class GrowthRecord:
    run_id: str
    iteration: int
    vocab_size: int


@dataclass
class ExpansionRunResult:
    config: ExpansionRunConfig
    records: list[GrowthRecord]
    store: GraphStore
    exhausted: bool = False
    aborted: str | None = None


@dataclass
class JudgeVerdict:
    question_ref: str
    verdict: str  # "correct" | "incorrect" | "unjudged"
    judge_model: str
    rationale: str


def run_expansion_experiment(config: ExpansionRunConfig,
                             gateway: LlmGateway) -> ExpansionRunResult:
    store = GraphStore()
    rng = random.Random(config.seed)
    current = store.add_node(config.start_word, config.language)
    records: list[GrowthRecord] = []
    exhausted = False
    aborted = None

    for t in range(1, config.iterations + 1):
        req = ExpansionRequest(
            chosen_node=current,
            target_languages={config.language},
            max_candidates=config.max_candidates,
        )
        try:
            candidates = suggest_related(store, gateway, req)
            for cand in candidates:
                if cand.already_known:
                    continue
                description = gateway.complete(LlmTask(
                    template_id="describe_word",
                    variables={"word": cand.word, "language": cand.language},
                ))
                node_id = store.add_node(cand.word, cand.language,
                                         annotation=description)
                if store.edge_between(current, node_id) is None:
                    store.add_edge(current, node_id, label=cand.relation)
        except TransportError as exc:
            aborted = str(exc)
            break
        store.set_used_for_expansion(current, True)
        records.append(GrowthRecord(config.run_id, t, store.node_count()))

        unused = sorted(n.id for n in store.nodes() if not n.used_for_expansion)
        if not unused:
            exhausted = True
            break
        current = rng.choice(unused)

    return ExpansionRunResult(config=config, records=records, store=store,
                              exhausted=exhausted, aborted=aborted)


@dataclass
class SuiteResult:
    rows: list[dict] = field(default_factory=list)
    summary: list[dict] = field(default_factory=list)
    failures: list[dict] = field(default_factory=list)


def run_experiment_suite(starts: dict[str, list[str]], iterations: int,
                         seed: int,
                         gateway_factory: Callable[[str, int], LlmGateway],
                         max_candidates: int = 10) -> SuiteResult:
    """Run one expansion experiment per (language, start word)."""
    result = SuiteResult()
    finals: dict[str, list[int]] = {}
    for li, (language, words) in enumerate(starts.items()):
        for wi, start_word in enumerate(words):
            run_id = f"{language}-{wi:02d}"
            config = ExpansionRunConfig(
                language=language, start_word=start_word,
                iterations=iterations, seed=seed + li * 1000 + wi,
                max_candidates=max_candidates, run_id=run_id,
            )
            run = run_expansion_experiment(
                config, gateway_factory(language, wi))
            if run.aborted:
                result.failures.append({"run_id": run_id, "error": run.aborted})
            for rec in run.records:
                result.rows.append({
                    "run_id": run_id, "language": language,
                    "start_word": start_word, "iteration": rec.iteration,
                    "vocab_size": rec.vocab_size,
                })
            if run.records:
                finals.setdefault(language, []).append(run.records[-1].vocab_size)
    for language, sizes in finals.items():
        result.summary.append({
            "language": language,
            "runs": len(sizes),
            "mean_final_size": statistics.mean(sizes),
            "std_final_size": statistics.stdev(sizes) if len(sizes) > 1 else 0.0,
        })
    return result


def write_growth_csv(rows: list[dict], path: str | Path) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", encoding="utf-8", newline="") as fh:
        writer = csv.DictWriter(
            fh, fieldnames=["run_id", "language", "start_word",
                            "iteration", "vocab_size"])
        writer.writeheader()
        for row in sorted(rows, key=lambda r: (r["run_id"], r["iteration"])):
            writer.writerow(row)


def write_summary_csv(summary: list[dict], path: str | Path) -> None:
    path = Path(path)
    with path.open("w", encoding="utf-8", newline="") as fh:
        writer = csv.DictWriter(
            fh, fieldnames=["language", "runs", "mean_final_size",
                            "std_final_size"])
        writer.writeheader()
        for row in sorted(summary, key=lambda r: r["language"]):
            writer.writerow(row)


def emit_plot_data(rows: list[dict], out_dir: str | Path,
                   max_candidates: int = 10) -> list[Path]:
    """Per-language curve files: each run, the pointwise mean, the upper bound.

    Runs that stopped early are carried forward at their last size so the
    mean stays defined at every iteration.
    """
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    by_language: dict[str, dict[str, dict[int, int]]] = {}
    for row in rows:
        by_language.setdefault(row["language"], {}) \
            .setdefault(row["run_id"], {})[int(row["iteration"])] = \
            int(row["vocab_size"])

    written: list[Path] = []
    for language, runs in sorted(by_language.items()):
        run_ids = sorted(runs)
        horizon = max(max(series) for series in runs.values())
        path = out_dir / f"{language}_curves.csv"
        with path.open("w", encoding="utf-8", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(["iteration", *run_ids, "mean", "upper_bound"])
            last = {rid: 1 for rid in run_ids}
            for t in range(0, horizon + 1):
                values = []
                for rid in run_ids:
                    last[rid] = runs[rid].get(t, last[rid])
                    values.append(last[rid])
                writer.writerow([
                    t, *values,
                    statistics.mean(values),
                    1 + max_candidates * t,
                ])
        written.append(path)
    return written


def run_quiz_eval(stores: dict[str, GraphStore], n_per_type: int,
                  gen_gateway: LlmGateway, judge_gateway: LlmGateway,
                  seed: int = 0) -> tuple[list[dict], list[JudgeVerdict]]:
    table: list[dict] = []
    verdicts: list[JudgeVerdict] = []
    for li, (language, store) in enumerate(sorted(stores.items())):
        rng = random.Random(seed + li)
        pool = sorted(store.nodes(), key=lambda n: n.id)
        for kind in ("mcq", "fib"):
            nodes = rng.sample(pool, min(n_per_type, len(pool)))
            questions = generate_questions(gen_gateway, kind, nodes)
            judged = correct = 0
            for i, q in enumerate(questions):
                ref = f"{language}/{kind}/{i}"
                task = LlmTask(
                    template_id="judge_qa",
                    variables={
                        "kind": kind,
                        "question": q.prompt_text,
                        "options": json.dumps(q.options, ensure_ascii=False),
                        "answer": q.correct_answer,
                    },
                    expects="json_object",
                )
                try:
                    outcome = judge_gateway.complete_structured(task)
                    verdict = str(outcome.value.get("verdict", "")).lower()
                    rationale = str(outcome.value.get("rationale", ""))
                except Exception as exc:
                    verdict, rationale = "", str(exc)
                if verdict in ("correct", "incorrect"):
                    judged += 1
                    correct += verdict == "correct"
                else:
                    verdict = "unjudged"
                verdicts.append(JudgeVerdict(
                    question_ref=ref, verdict=verdict,
                    judge_model=judge_gateway.config.model_name,
                    rationale=rationale,
                ))
            table.append({
                "language": language,
                "type": kind,
                "generated": len(questions),
                "judged": judged,
                "correct": correct,
                "pct": 100.0 * correct / judged if judged else "",
            })
    return table, verdicts


def write_quiz_table(table: list[dict], path: str | Path) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", encoding="utf-8", newline="") as fh:
        writer = csv.DictWriter(
            fh, fieldnames=["language", "type", "generated", "judged",
                            "correct", "pct"])
        writer.writeheader()
        for row in table:
            writer.writerow(row)
