import csv
import json
import statistics

import pytest
from click.testing import CliRunner

from conftest import mock_gateway
from diymkg.cli import cli
from diymkg.errors import TransportError
from diymkg.evalharness import (
    ExpansionRunConfig,
    emit_plot_data,
    run_expansion_experiment,
    run_experiment_suite,
    run_quiz_eval,
    write_growth_csv,
)
from diymkg.graph_store import GraphStore
from diymkg.llm_gateway import MockBackend
from diymkg.mocks import make_growth_script, make_judge_script, make_quiz_script
from diymkg.textnorm import normalize


def growth_gateway(words_per_call=10, repeat_ratio=0.0, seed=0):
    return mock_gateway(make_growth_script(words_per_call, repeat_ratio, seed))


class TestExpansionRun:
    def test_saturating_mock(self):
        # a mock that always returns the same 5 words: vocab caps at 6
        fixed = json.dumps([
            {"word": f"w{i}", "language": "es", "relation": "", "gloss": ""}
            for i in range(5)
        ])
        gw = mock_gateway({"suggest_related": fixed, "describe_word": "d"})
        config = ExpansionRunConfig(language="es", start_word="start",
                                    iterations=20, seed=1, run_id="r")
        run = run_expansion_experiment(config, gw)
        assert run.records[-1].vocab_size == 6
        assert run.exhausted
        # flat after saturation
        sizes = [r.vocab_size for r in run.records]
        assert sizes == sorted(sizes)

    def test_fresh_words_follow_upper_bound(self):
        config = ExpansionRunConfig(language="es", start_word="start",
                                    iterations=30, seed=1, run_id="r")
        run = run_expansion_experiment(config, growth_gateway())
        assert [r.vocab_size for r in run.records] == \
            [1 + 10 * t for t in range(1, 31)]

    def test_single_iteration(self):
        config = ExpansionRunConfig(language="es", start_word="s",
                                    iterations=1, seed=0, run_id="r")
        assert len(run_expansion_experiment(config, growth_gateway()).records) == 1

    def test_zero_iterations_disallowed(self):
        with pytest.raises(ValueError):
            ExpansionRunConfig(language="es", start_word="s", iterations=0)

    def test_transport_failure_keeps_partial_records(self):
        script = make_growth_script(5, 0.0, 0)
        calls = {"n": 0}
        inner = script["suggest_related"]

        def flaky(variables):
            calls["n"] += 1
            if calls["n"] > 3:
                raise TransportError("down")
            return inner(variables)

        script["suggest_related"] = flaky
        gw = mock_gateway(script, max_retries=0)
        config = ExpansionRunConfig(language="es", start_word="s",
                                    iterations=10, seed=0, run_id="r")
        run = run_expansion_experiment(config, gw)
        assert run.aborted
        assert len(run.records) == 3

    def test_sampling_never_reuses_expanded_words(self):
        config = ExpansionRunConfig(language="es", start_word="s",
                                    iterations=50, seed=5, run_id="r",
                                    max_candidates=3)
        run = run_expansion_experiment(config, growth_gateway(3, 0.7, seed=5))
        # every word is expanded at most once, so used flags count the
        # performed iterations
        used = sum(n.used_for_expansion for n in run.store.nodes())
        assert used == len(run.records)

    def test_monotone_and_bounded(self):
        config = ExpansionRunConfig(language="es", start_word="s",
                                    iterations=80, seed=9, run_id="r")
        run = run_expansion_experiment(config, growth_gateway(10, 0.6, seed=9))
        sizes = [r.vocab_size for r in run.records]
        assert all(a <= b for a, b in zip(sizes, sizes[1:]))
        assert all(s <= 1 + 10 * r.iteration for s, r in zip(sizes, run.records))


class TestSuite:
    def factory(self, language, run_index):
        return growth_gateway(5, 0.5, seed=run_index)

    def test_run_counts(self):
        starts = {"es": ["uno", "dos"], "ko": ["하나"]}
        result = run_experiment_suite(starts, 10, 42, self.factory)
        assert {r["run_id"] for r in result.rows} == {"es-00", "es-01", "ko-00"}
        assert len(result.rows) == 30

    def test_summary_stats(self):
        starts = {"es": ["uno", "dos", "tres"]}
        result = run_experiment_suite(starts, 10, 42, self.factory)
        finals = [max(r["vocab_size"] for r in result.rows
                      if r["run_id"] == f"es-{i:02d}") for i in range(3)]
        summary = result.summary[0]
        assert summary["mean_final_size"] == statistics.mean(finals)
        assert summary["std_final_size"] == statistics.stdev(finals)

    def test_csv_byte_determinism(self, tmp_path):
        starts = {"es": ["uno"], "ja": ["猫"]}
        paths = []
        for i in range(2):
            result = run_experiment_suite(starts, 15, 7, self.factory)
            path = tmp_path / f"growth{i}.csv"
            write_growth_csv(result.rows, path)
            paths.append(path)
        assert paths[0].read_bytes() == paths[1].read_bytes()

    def test_dedup_across_final_vocab(self):
        starts = {"es": ["uno"]}
        result = run_experiment_suite(starts, 50, 3, lambda l, i:
                                      growth_gateway(10, 0.8, seed=i))
        assert result.failures == []


class TestPlotData:
    def test_mean_and_upper_bound_columns(self, tmp_path):
        rows = []
        for rid, growth in (("es-00", 2), ("es-01", 4)):
            size = 1
            for t in range(1, 6):
                size += growth
                rows.append({"run_id": rid, "language": "es",
                             "start_word": "s", "iteration": t,
                             "vocab_size": size})
        (path,) = emit_plot_data(rows, tmp_path, max_candidates=10)
        with path.open() as fh:
            table = list(csv.DictReader(fh))
        assert table[0]["iteration"] == "0"
        row3 = table[3]
        assert float(row3["mean"]) == statistics.mean(
            [1 + 2 * 3, 1 + 4 * 3])
        assert int(row3["upper_bound"]) == 1 + 10 * 3
        assert int(table[-1]["upper_bound"]) == 1 + 10 * 5

    def test_single_run_mean_equals_run(self, tmp_path):
        rows = [{"run_id": "es-00", "language": "es", "start_word": "s",
                 "iteration": t, "vocab_size": 1 + 3 * t} for t in range(1, 4)]
        (path,) = emit_plot_data(rows, tmp_path)
        with path.open() as fh:
            table = list(csv.DictReader(fh))
        assert all(float(r["mean"]) == float(r["es-00"]) for r in table)


class TestQuizEval:
    def vocab(self, language, n=30):
        store = GraphStore()
        for i in range(n):
            store.add_node(f"{language}w{i}", language)
        return store

    def test_always_correct_judge_gives_100(self):
        stores = {"es": self.vocab("es"), "ko": self.vocab("ko")}
        gen = mock_gateway(make_quiz_script())
        judge = mock_gateway(make_judge_script())
        table, verdicts = run_quiz_eval(stores, 10, gen, judge, seed=0)
        assert len(table) == 4
        assert all(row["pct"] == 100.0 for row in table)
        assert all(v.verdict == "correct" for v in verdicts)

    def test_scripted_mix_matches_hand_count(self):
        stores = {"es": self.vocab("es")}
        gen = mock_gateway(make_quiz_script())
        judge = mock_gateway(make_judge_script(incorrect_every=5))
        table, _ = run_quiz_eval(stores, 10, gen, judge, seed=0)
        # 10 judged per type, every 5th call incorrect -> 8/10 = 80%
        for row in table:
            assert row["judged"] == 10
            assert row["correct"] == 8
            assert row["pct"] == 100.0 * 8 / 10

    def test_unjudged_excluded_from_denominator(self):
        stores = {"es": self.vocab("es")}
        gen = mock_gateway(make_quiz_script())
        judge = mock_gateway({"judge_qa": ["not json", "not json",
                                           '{"verdict": "correct"}']},
                             max_retries=0)
        table, verdicts = run_quiz_eval(stores, 5, gen, judge, seed=0)
        unjudged = [v for v in verdicts if v.verdict == "unjudged"]
        assert len(unjudged) == 2
        mcq = next(r for r in table if r["type"] == "mcq")
        assert mcq["judged"] == 3
        assert mcq["pct"] == 100.0


class TestCli:
    def test_eval_expand_mock(self, tmp_path):
        starts = tmp_path / "starts"
        starts.mkdir()
        (starts / "es.txt").write_text("uno\ndos\n")
        (starts / "ko.txt").write_text("하나\n")
        out = tmp_path / "growth.csv"
        runner = CliRunner()
        result = runner.invoke(cli, [
            "eval", "expand", "--languages", "es,ko",
            "--starts", str(starts / "<lang>.txt"),
            "--iterations", "10", "--seed", "42", "--out", str(out),
            "--plot-dir", str(tmp_path / "plots"),
        ])
        assert result.exit_code == 0, result.output
        with out.open() as fh:
            rows = list(csv.DictReader(fh))
        assert len(rows) == 30
        assert (tmp_path / "growth_summary.csv").exists()
        assert (tmp_path / "plots" / "es_curves.csv").exists()

    def test_eval_quiz_mock(self, tmp_path):
        out = tmp_path / "table.csv"
        runner = CliRunner()
        result = runner.invoke(cli, [
            "eval", "quiz", "--n", "5", "--languages", "es,ja",
            "--out", str(out), "--seed", "1",
        ])
        assert result.exit_code == 0, result.output
        with out.open() as fh:
            rows = list(csv.DictReader(fh))
        assert len(rows) == 4
        assert all(row["pct"] == "100.0" for row in rows)
        assert (tmp_path / "table_verdicts.jsonl").exists()

    def test_eval_quiz_with_graph_file(self, tmp_path):
        store = GraphStore()
        for i in range(10):
            store.add_node(f"palabra{i}", "es")
        graph = tmp_path / "graph.json"
        store.save(graph)
        runner = CliRunner()
        result = runner.invoke(cli, [
            "eval", "quiz", "--n", "3", "--languages", "es",
            "--graph", str(graph), "--out", str(tmp_path / "t.csv"),
        ])
        assert result.exit_code == 0, result.output
