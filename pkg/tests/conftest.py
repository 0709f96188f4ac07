import pytest

from diymkg.graph_store import GraphStore
from diymkg.llm_gateway import LlmBackendConfig, LlmGateway, MockBackend


@pytest.fixture
def store():
    return GraphStore()


@pytest.fixture
def disk_store(tmp_path):
    return GraphStore(tmp_path / "data", autosave=True)


def mock_gateway(script, max_retries=2):
    config = LlmBackendConfig(base_url="mock:", model_name="mock",
                              max_retries=max_retries)
    return LlmGateway(config, backend=MockBackend(script), backoff_base=0.0)


@pytest.fixture
def small_graph(store):
    """a - b - c path plus isolated d; returns (store, ids dict)."""
    ids = {
        "a": store.add_node("gato", "es"),
        "b": store.add_node("cat", "en"),
        "c": store.add_node("chat", "fr"),
        "d": store.add_node("고양이", "ko"),
    }
    store.add_edge(ids["a"], ids["b"], "cognate")
    store.add_edge(ids["b"], ids["c"], "cognate")
    return store, ids
