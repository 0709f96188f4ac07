import json

import pytest

from diymkg.errors import (
    DuplicateEdge,
    DuplicateSnapshotName,
    DuplicateWord,
    EmptyWord,
    IntegrityError,
    NotFound,
    SchemaVersionMismatch,
    SelfLoop,
    TooFewNodes,
)
from diymkg.graph_store import GraphStore


class TestAddNode:
    def test_fresh_insert_defaults(self, store):
        nid = store.add_node("gato", "es")
        node = store.get_node(nid)
        assert node.click_count == 0
        assert node.used_for_expansion is False
        assert node.tags == set()

    def test_duplicate_rejected(self, store):
        store.add_node("gato", "es")
        with pytest.raises(DuplicateWord):
            store.add_node("gato", "es")

    def test_duplicate_after_normalization(self, store):
        store.add_node("gato", "es")
        with pytest.raises(DuplicateWord):
            store.add_node("Gato ", "es")

    def test_same_word_two_languages(self, store):
        a = store.add_node("chat", "fr")
        b = store.add_node("chat", "en")
        assert a != b

    def test_empty_word(self, store):
        with pytest.raises(EmptyWord):
            store.add_node("   ", "es")


class TestEditNode:
    def test_annotation_stored_verbatim(self, store):
        nid = store.add_node("gato", "es")
        store.edit_node(nid, annotation="**cat**; pet")
        assert store.get_node(nid).annotation == "**cat**; pet"

    def test_tags_are_a_set(self, store):
        nid = store.add_node("gato", "es")
        store.edit_node(nid, tags={"animal", "animal"})
        assert store.get_node(nid).tags == {"animal"}

    def test_rename_collision(self, store):
        store.add_node("gato", "es")
        nid = store.add_node("perro", "es")
        with pytest.raises(DuplicateWord):
            store.edit_node(nid, word="gato")

    def test_rename_updates_lookup(self, store):
        nid = store.add_node("gato", "es")
        store.edit_node(nid, word="gata")
        assert store.find_node("gata", "es") == nid
        assert store.find_node("gato", "es") is None

    def test_partial_update_preserves_clicks(self, store):
        nid = store.add_node("gato", "es")
        store.increment_click(nid)
        store.edit_node(nid, annotation="x")
        assert store.get_node(nid).click_count == 1

    def test_not_found(self, store):
        with pytest.raises(NotFound):
            store.edit_node("n999", annotation="x")


class TestEdges:
    def test_add_edge(self, small_graph):
        store, ids = small_graph
        eid = store.add_edge(ids["a"], ids["d"], "loanword")
        assert store.get_edge(eid).label == "loanword"

    def test_self_loop(self, small_graph):
        store, ids = small_graph
        with pytest.raises(SelfLoop):
            store.add_edge(ids["a"], ids["a"])

    def test_unordered_pair_uniqueness(self, small_graph):
        store, ids = small_graph
        with pytest.raises(DuplicateEdge):
            store.add_edge(ids["b"], ids["a"])

    def test_endpoints_must_exist(self, small_graph):
        store, ids = small_graph
        with pytest.raises(NotFound):
            store.add_edge(ids["a"], "n999")

    def test_edit_edge_clear_label(self, small_graph):
        store, ids = small_graph
        eid = store.edge_between(ids["a"], ids["b"])
        store.edit_edge(eid, label="")
        assert store.get_edge(eid).label == ""

    def test_edit_edge_markdown_description(self, small_graph):
        store, ids = small_graph
        eid = store.edge_between(ids["a"], ids["b"])
        md = "| a | b |\n|---|---|"
        store.edit_edge(eid, description=md)
        assert store.get_edge(eid).description == md

    def test_edit_missing_edge(self, store):
        with pytest.raises(NotFound):
            store.edit_edge("e999", label="x")


class TestHyperEdges:
    def test_quiz_hyper_edge(self, small_graph):
        store, ids = small_graph
        he = store.add_hyper_edge(set(ids.values()), "quiz", "quizzes/q.json")
        assert store.get_hyper_edge(he).doc_type == "quiz"

    def test_too_few_nodes(self, small_graph):
        store, ids = small_graph
        with pytest.raises(TooFewNodes):
            store.add_hyper_edge({ids["a"]}, "note", "x.md")

    def test_unknown_member(self, small_graph):
        store, ids = small_graph
        with pytest.raises(NotFound):
            store.add_hyper_edge({ids["a"], "n999"}, "note", "x.md")


class TestRemoval:
    def test_node_cascade_counts(self, store):
        hub = store.add_node("hub", "en")
        spokes = [store.add_node(f"w{i}", "en") for i in range(3)]
        for s in spokes:
            store.add_edge(hub, s)
        report = store.remove_element(hub)
        assert len(report.nodes) == 1
        assert len(report.edges) == 3

    def test_two_node_hyper_edge_removed(self, small_graph):
        store, ids = small_graph
        he = store.add_hyper_edge({ids["a"], ids["b"]}, "note", "x.md")
        report = store.remove_element(ids["a"])
        assert he in report.hyper_edges

    def test_larger_hyper_edge_shrinks(self, small_graph):
        store, ids = small_graph
        he = store.add_hyper_edge({ids["a"], ids["b"], ids["c"]}, "note", "x.md")
        report = store.remove_element(ids["a"])
        assert he in report.modified_hyper_edges
        assert store.get_hyper_edge(he).node_ids == {ids["b"], ids["c"]}

    def test_edge_removal_leaves_endpoints(self, small_graph):
        store, ids = small_graph
        eid = store.edge_between(ids["a"], ids["b"])
        store.remove_element(eid)
        assert store.has_node(ids["a"]) and store.has_node(ids["b"])

    def test_removed_word_can_be_readded(self, store):
        nid = store.add_node("gato", "es")
        store.remove_element(nid)
        assert store.add_node("gato", "es") != nid

    def test_unknown_id(self, store):
        with pytest.raises(NotFound):
            store.remove_element("zzz")


class TestLookups:
    def test_find_node(self, small_graph):
        store, ids = small_graph
        assert store.find_node("gato", "es") == ids["a"]
        assert store.find_node(" GATO ", "es") == ids["a"]
        assert store.find_node("gato", "ja") is None

    def test_subgraph_radius_1_center(self, small_graph):
        store, ids = small_graph
        sg = store.subgraph_of(ids["b"], 1)
        assert {n.id for n in sg.nodes} == {ids["a"], ids["b"], ids["c"]}
        assert len(sg.edges) == 2

    def test_subgraph_radius_1_endpoint(self, small_graph):
        store, ids = small_graph
        sg = store.subgraph_of(ids["a"], 1)
        assert {n.id for n in sg.nodes} == {ids["a"], ids["b"]}
        assert len(sg.edges) == 1

    def test_subgraph_isolated(self, small_graph):
        store, ids = small_graph
        sg = store.subgraph_of(ids["d"], 1)
        assert [n.id for n in sg.nodes] == [ids["d"]]
        assert sg.edges == []

    def test_subgraph_contains_contained_hyper_edges(self, small_graph):
        store, ids = small_graph
        inside = store.add_hyper_edge({ids["a"], ids["b"]}, "note", "x.md")
        store.add_hyper_edge({ids["a"], ids["d"]}, "note", "y.md")
        sg = store.subgraph_of(ids["b"], 1)
        assert [h.id for h in sg.hyper_edges] == [inside]

    def test_nodes_with_tag_exact_match(self, small_graph):
        store, ids = small_graph
        store.edit_node(ids["a"], tags={"animal"})
        store.edit_node(ids["b"], tags={"Animal"})
        assert store.nodes_with_tag("animal") == {ids["a"]}
        assert store.nodes_with_tag("plant") == set()


class TestClicks:
    def test_increment(self, small_graph):
        store, ids = small_graph
        assert store.increment_click(ids["a"]) == 1
        store.increment_click(ids["a"])
        assert store.increment_click(ids["a"]) == 3

    def test_unknown(self, store):
        with pytest.raises(NotFound):
            store.increment_click("n999")

    def test_lowest_click_ordering(self, store):
        a = store.add_node("a", "en")
        b = store.add_node("b", "en")
        c = store.add_node("c", "en")
        for _ in range(5):
            store.increment_click(a)
        for _ in range(2):
            store.increment_click(c)
        assert [n.id for n in store.lowest_click_nodes(2)] == [b, c]

    def test_tie_break_oldest_first(self, store):
        first = store.add_node("a", "en")
        store.add_node("b", "en")
        assert store.lowest_click_nodes(1)[0].id == first

    def test_truncation(self, store):
        for i in range(3):
            store.add_node(f"w{i}", "en")
        assert len(store.lowest_click_nodes(10)) == 3

    def test_language_filter(self, small_graph):
        store, ids = small_graph
        picked = store.lowest_click_nodes(10, {"es"})
        assert [n.id for n in picked] == [ids["a"]]


class TestPersistence:
    def test_round_trip_identity(self, tmp_path, small_graph):
        store, _ = small_graph
        path = tmp_path / "graph.json"
        store.save(path)
        other = GraphStore()
        other.load(path)
        assert other.to_dict() == store.to_dict()

    def test_file_is_pretty_printed(self, tmp_path, small_graph):
        store, _ = small_graph
        path = tmp_path / "graph.json"
        store.save(path)
        text = path.read_text(encoding="utf-8")
        assert text.count("\n") > 10
        assert "고양이" in text  # human-readable, not escaped

    def test_dangling_edge_rejected(self, tmp_path, small_graph):
        store, _ = small_graph
        path = tmp_path / "graph.json"
        store.save(path)
        data = json.loads(path.read_text())
        data["edges"][0]["target"] = "n404"
        path.write_text(json.dumps(data))
        with pytest.raises(IntegrityError, match="n404"):
            GraphStore().load(path)

    def test_version_mismatch(self, tmp_path, small_graph):
        store, _ = small_graph
        path = tmp_path / "graph.json"
        store.save(path)
        data = json.loads(path.read_text())
        data["version"] = 999
        path.write_text(json.dumps(data))
        with pytest.raises(SchemaVersionMismatch):
            GraphStore().load(path)

    def test_duplicate_word_rejected_on_load(self, tmp_path, small_graph):
        store, _ = small_graph
        path = tmp_path / "graph.json"
        store.save(path)
        data = json.loads(path.read_text())
        clone = dict(data["nodes"][0])
        clone["id"] = "n9999"
        data["nodes"].append(clone)
        path.write_text(json.dumps(data))
        with pytest.raises(IntegrityError):
            GraphStore().load(path)

    def test_id_counter_resumes_after_load(self, tmp_path, small_graph):
        store, ids = small_graph
        path = tmp_path / "graph.json"
        store.save(path)
        other = GraphStore()
        other.load(path)
        fresh = other.add_node("new", "en")
        assert fresh not in ids.values()


class TestSnapshots:
    def test_create_restore_round_trip(self, disk_store):
        a = disk_store.add_node("gato", "es")
        disk_store.snapshot_create("week1")
        before = disk_store.to_dict()
        disk_store.add_node("perro", "es")
        disk_store.remove_element(a)
        disk_store.snapshot_restore("week1")
        assert disk_store.to_dict() == before

    def test_duplicate_name(self, disk_store):
        disk_store.snapshot_create("week1")
        with pytest.raises(DuplicateSnapshotName):
            disk_store.snapshot_create("week1")

    def test_restore_missing(self, disk_store):
        with pytest.raises(NotFound):
            disk_store.snapshot_restore("nope")

    def test_restore_leaves_auto_snapshot(self, disk_store):
        disk_store.add_node("gato", "es")
        disk_store.snapshot_create("week1")
        disk_store.snapshot_restore("week1")
        autos = [n for n in disk_store.snapshot_list()
                 if n.startswith("pre-restore-")]
        assert len(autos) == 1


class TestWriteThrough:
    def test_mutations_hit_disk(self, tmp_path):
        store = GraphStore(tmp_path / "d", autosave=True)
        store.add_node("gato", "es")
        reloaded = GraphStore(tmp_path / "d")
        assert reloaded.find_node("gato", "es") is not None

    def test_rollback_on_write_failure(self, tmp_path, monkeypatch):
        from diymkg.errors import IoError

        store = GraphStore(tmp_path / "d", autosave=True)
        store.add_node("gato", "es")

        def boom(path=None):
            raise IoError("disk full")

        monkeypatch.setattr(store, "save", boom)
        with pytest.raises(IoError):
            store.add_node("perro", "es")
        monkeypatch.undo()
        assert store.find_node("perro", "es") is None
        assert GraphStore(tmp_path / "d").find_node("perro", "es") is None
