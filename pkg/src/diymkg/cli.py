"""Command-line entry points: the server and the evaluation harness."""

from __future__ import annotations

import json
from pathlib import Path

import click

from .errors import BindError, ConfigError
from .graph_store import GraphStore
from .llm_gateway import (
    LlmBackendConfig,
    LlmGateway,
    MockBackend,
    safe_mode_from_env,
)
from .mocks import make_growth_script, make_judge_script, make_quiz_script
from . import evalharness as harness


@click.group()
def cli():
    """Multilingual vocabulary knowledge graph."""


@cli.command()
@click.option("--data-dir", default="data", show_default=True,
              type=click.Path(file_okay=False))
@click.option("--port", default=8000, show_default=True, type=int)
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option("--safe-mode", is_flag=True, default=None,
              help="Filter suggestions through an extra safety LLM pass.")
@click.option("--prompts-dir", default=None, type=click.Path(file_okay=False),
              help="Prompt template directory (default: <data-dir>/prompts).")
def serve(data_dir, port, host, safe_mode, prompts_dir):
    """Run the HTTP service hosting the graph, expansion, and quiz APIs."""
    import uvicorn

    from .api import create_app

    if safe_mode is None:
        safe_mode = safe_mode_from_env()
    app = create_app(data_dir, safe_mode=safe_mode, prompts_dir=prompts_dir)
    try:
        uvicorn.run(app, host=host, port=port, log_level="info")
    except OSError as exc:
        raise BindError(f"cannot bind {host}:{port}: {exc}") from exc


@cli.group("eval")
def eval_group():
    """Reproduce the expansion-growth and quiz-correctness experiments."""


def _live_gateway(model: str | None = None) -> LlmGateway:
    config = LlmBackendConfig.from_env()
    if config.base_url.startswith("mock:"):
        raise ConfigError(
            "--live needs DIYMKG_LLM_BASE_URL (and DIYMKG_LLM_MODEL) set")
    if model:
        config = LlmBackendConfig(
            base_url=config.base_url, model_name=model,
            api_key_env=config.api_key_env, timeout=config.timeout,
            max_retries=config.max_retries)
    return LlmGateway(config)


def _read_starts(starts_template: str, language: str) -> list[str]:
    path = Path(starts_template.replace("<lang>", language))
    if not path.exists():
        raise ConfigError(f"start-word file {path} not found")
    return [line.strip() for line in path.read_text(encoding="utf-8").splitlines()
            if line.strip()]


@eval_group.command("expand")
@click.option("--languages", required=True,
              help="Comma-separated language codes, e.g. es,ko,ja.")
@click.option("--starts", required=True,
              help="Start-word file path; use <lang> as a placeholder, "
                   "e.g. starts/<lang>.txt.")
@click.option("--iterations", default=500, show_default=True, type=int)
@click.option("--seed", default=42, show_default=True, type=int)
@click.option("--out", default="growth.csv", show_default=True,
              type=click.Path(dir_okay=False))
@click.option("--live", is_flag=True,
              help="Query the configured real backend instead of the mock.")
@click.option("--max-candidates", default=10, show_default=True, type=int)
@click.option("--repeat-ratio", default=0.5, show_default=True, type=float,
              help="Mock only: fraction of suggested words already emitted.")
@click.option("--plot-dir", default=None, type=click.Path(file_okay=False),
              help="Also write per-language plot-ready curve files here.")
def eval_expand(languages, starts, iterations, seed, out, live,
                max_candidates, repeat_ratio, plot_dir):
    """Iterative vocabulary-expansion experiment with growth curves."""
    langs = [c.strip() for c in languages.split(",") if c.strip()]
    start_words = {lang: _read_starts(starts, lang) for lang in langs}

    if live:
        def factory(language: str, run_index: int) -> LlmGateway:
            return _live_gateway()
    else:
        def factory(language: str, run_index: int) -> LlmGateway:
            script = make_growth_script(
                words_per_call=max_candidates, repeat_ratio=repeat_ratio,
                seed=seed + run_index)
            config = LlmBackendConfig(base_url="mock:", model_name="mock")
            return LlmGateway(config, backend=MockBackend(script))

    result = harness.run_experiment_suite(
        start_words, iterations, seed, factory, max_candidates=max_candidates)
    harness.write_growth_csv(result.rows, out)
    summary_path = Path(out).with_name(Path(out).stem + "_summary.csv")
    harness.write_summary_csv(result.summary, summary_path)
    if plot_dir:
        harness.emit_plot_data(result.rows, plot_dir, max_candidates)
    for row in result.summary:
        click.echo(f"{row['language']}: {row['runs']} runs, "
                   f"mean final size {row['mean_final_size']:.1f} "
                   f"(std {row['std_final_size']:.1f})")
    for failure in result.failures:
        click.echo(f"FAILED {failure['run_id']}: {failure['error']}", err=True)
    click.echo(f"wrote {out} and {summary_path}")


@eval_group.command("quiz")
@click.option("--n", "n_per_type", default=50, show_default=True, type=int,
              help="Questions per type per language.")
@click.option("--languages", required=True)
@click.option("--judge-model", default=None,
              help="Judge model name (live mode).")
@click.option("--graph", "graph_path", default=None,
              type=click.Path(dir_okay=False, exists=True),
              help="Graph file supplying the vocabulary; without it a mock "
                   "vocabulary is grown first.")
@click.option("--out", default="table.csv", show_default=True,
              type=click.Path(dir_okay=False))
@click.option("--seed", default=42, show_default=True, type=int)
@click.option("--live", is_flag=True)
def eval_quiz(n_per_type, languages, judge_model, graph_path, out, seed, live):
    """Generate quizzes over sampled words and judge their correctness."""
    langs = [c.strip() for c in languages.split(",") if c.strip()]

    stores: dict[str, GraphStore] = {}
    if graph_path:
        base = GraphStore()
        base.load(graph_path)
        for lang in langs:
            store = GraphStore()
            for node in base.nodes():
                if node.language == lang:
                    store.add_node(node.word, node.language, node.annotation)
            stores[lang] = store
    else:
        # grow a small mock vocabulary per language to sample from
        for i, lang in enumerate(langs):
            config = harness.ExpansionRunConfig(
                language=lang, start_word=f"{lang}start", iterations=20,
                seed=seed + i, run_id=f"vocab-{lang}")
            script = make_growth_script(words_per_call=10, seed=seed + i)
            gw = LlmGateway(LlmBackendConfig(base_url="mock:"),
                            backend=MockBackend(script))
            stores[lang] = harness.run_expansion_experiment(config, gw).store

    if live:
        gen_gateway = _live_gateway()
        judge_gateway = _live_gateway(judge_model)
    else:
        gen_gateway = LlmGateway(LlmBackendConfig(base_url="mock:"),
                                 backend=MockBackend(make_quiz_script(seed=seed)))
        judge_config = LlmBackendConfig(
            base_url="mock:", model_name=judge_model or "mock-judge")
        judge_gateway = LlmGateway(judge_config,
                                   backend=MockBackend(make_judge_script()))

    table, verdicts = harness.run_quiz_eval(
        stores, n_per_type, gen_gateway, judge_gateway, seed=seed)
    harness.write_quiz_table(table, out)
    verdict_path = Path(out).with_name(Path(out).stem + "_verdicts.jsonl")
    with verdict_path.open("w", encoding="utf-8") as fh:
        for v in verdicts:
            fh.write(json.dumps(v.__dict__, ensure_ascii=False) + "\n")
    for row in table:
        pct = f"{row['pct']:.1f}%" if row["pct"] != "" else "n/a"
        click.echo(f"{row['language']} {row['type']}: {pct} "
                   f"({row['correct']}/{row['judged']} judged)")
    click.echo(f"wrote {out} and {verdict_path}")


def main():
    cli()


if __name__ == "__main__":
    main()
