"""Property tests over random operation sequences."""

import random
from collections import deque

from hypothesis import given, settings, strategies as st

from diymkg.errors import DiymkgError
from diymkg.graph_store import GraphStore
from diymkg.textnorm import normalize

WORDS = ["gato", "perro", "casa", "cat", "dog", "house", "chat", "chien",
         "고양이", "개", "猫", "犬", "Gato", " cat "]
LANGS = ["es", "en", "fr", "ko", "ja"]

OPS = ["add_node", "add_edge", "remove", "click", "edit_node", "tag",
       "add_hyper_edge"]


def apply_random_ops(store, rng, n_ops):
    """Drive the store with a random op sequence, ignoring domain errors."""
    for _ in range(n_ops):
        op = rng.choice(OPS)
        nodes = [n.id for n in store.nodes()]
        try:
            if op == "add_node":
                store.add_node(rng.choice(WORDS), rng.choice(LANGS))
            elif op == "add_edge" and len(nodes) >= 2:
                store.add_edge(rng.choice(nodes), rng.choice(nodes))
            elif op == "remove" and nodes:
                elements = nodes + [e["id"] for e in store.to_dict()["edges"]]
                store.remove_element(rng.choice(elements))
            elif op == "click" and nodes:
                store.increment_click(rng.choice(nodes))
            elif op == "edit_node" and nodes:
                store.edit_node(rng.choice(nodes),
                                annotation=rng.choice(["", "**x**", "note"]))
            elif op == "tag" and nodes:
                store.edit_node(rng.choice(nodes),
                                tags=set(rng.sample(["a", "b", "c"],
                                                    rng.randint(0, 3))))
            elif op == "add_hyper_edge" and len(nodes) >= 2:
                members = rng.sample(nodes, rng.randint(2, min(4, len(nodes))))
                store.add_hyper_edge(members, "note", "doc.md")
        except DiymkgError:
            pass


def check_integrity(store):
    data = store.to_dict()
    node_ids = {n["id"] for n in data["nodes"]}
    keys = [(normalize(n["word"]), n["language"]) for n in data["nodes"]]
    assert len(keys) == len(set(keys)), "duplicate (word, language)"
    assert all(n["click_count"] >= 0 for n in data["nodes"])
    pairs = set()
    for e in data["edges"]:
        assert e["source"] in node_ids and e["target"] in node_ids
        assert e["source"] != e["target"]
        pair = frozenset((e["source"], e["target"]))
        assert pair not in pairs
        pairs.add(pair)
    for h in data["hyper_edges"]:
        assert len(h["node_ids"]) >= 2
        assert set(h["node_ids"]) <= node_ids


@settings(max_examples=30, deadline=None)
@given(seed=st.integers(0, 10**6), n_ops=st.integers(1, 120))
def test_integrity_after_random_ops(seed, n_ops):
    store = GraphStore()
    apply_random_ops(store, random.Random(seed), n_ops)
    check_integrity(store)


@settings(max_examples=15, deadline=None)
@given(seed=st.integers(0, 10**6))
def test_persist_load_identity_after_random_ops(seed, tmp_path_factory):
    store = GraphStore()
    apply_random_ops(store, random.Random(seed), 60)
    path = tmp_path_factory.mktemp("g") / "graph.json"
    store.save(path)
    other = GraphStore()
    other.load(path)
    assert other.to_dict() == store.to_dict()


def bfs_oracle(data, start, radius):
    """Independent breadth-first search over the serialized graph."""
    adjacency = {}
    for e in data["edges"]:
        adjacency.setdefault(e["source"], set()).add(e["target"])
        adjacency.setdefault(e["target"], set()).add(e["source"])
    dist = {start: 0}
    queue = deque([start])
    while queue:
        nid = queue.popleft()
        if dist[nid] == radius:
            continue
        for nb in adjacency.get(nid, ()):
            if nb not in dist:
                dist[nb] = dist[nid] + 1
                queue.append(nb)
    return set(dist)


@settings(max_examples=25, deadline=None)
@given(seed=st.integers(0, 10**6), radius=st.integers(1, 4))
def test_subgraph_matches_bfs_oracle(seed, radius):
    rng = random.Random(seed)
    store = GraphStore()
    apply_random_ops(store, rng, 80)
    data = store.to_dict()
    if not data["nodes"]:
        return
    center = rng.choice([n["id"] for n in data["nodes"]])
    expected = bfs_oracle(data, center, radius)
    sg = store.subgraph_of(center, radius)
    assert {n.id for n in sg.nodes} == expected
    expected_edges = {e["id"] for e in data["edges"]
                      if e["source"] in expected and e["target"] in expected}
    assert {e.id for e in sg.edges} == expected_edges


@settings(max_examples=20, deadline=None)
@given(seed=st.integers(0, 10**6), k=st.integers(1, 10))
def test_lowest_click_is_sorted_prefix(seed, k):
    store = GraphStore()
    apply_random_ops(store, random.Random(seed), 60)
    picked = store.lowest_click_nodes(k)
    full = sorted(store.nodes(),
                  key=lambda n: (n.click_count, n.created_at, n.id))
    assert [n.id for n in picked] == [n.id for n in full[:k]]
