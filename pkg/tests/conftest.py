import io
from pathlib import Path

import pytest
from fastapi.testclient import TestClient
from hypothesis import HealthCheck, settings

from treenav.folksonomy import BookmarkStore
from treenav.ingest import load_graph, parse_bookmarks, save_graph
from treenav.merge import build_from_bundle
from treenav.service import ServiceData, create_app

import util

FIXTURES = Path(__file__).resolve().parent.parent / "fixtures"

settings.register_profile(
    "suite", max_examples=40, deadline=None, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile("suite")


@pytest.fixture(scope="session")
def fixtures_dir() -> Path:
    return FIXTURES


@pytest.fixture(scope="session")
def bundle():
    return util.parse_dir(FIXTURES)


@pytest.fixture(scope="session")
def built(bundle):
    return build_from_bundle(bundle)


@pytest.fixture(scope="session")
def graph(built):
    return built[0]


@pytest.fixture(scope="session")
def report(built):
    return built[1]


@pytest.fixture(scope="session")
def bookmarks():
    with open(FIXTURES / "bookmarks.jsonl", "rb") as fh:
        return parse_bookmarks(fh)


@pytest.fixture(scope="session")
def store(bookmarks):
    return BookmarkStore(bookmarks)


@pytest.fixture(scope="session")
def reloaded(graph):
    buf = io.BytesIO()
    save_graph(graph, buf)
    buf.seek(0)
    return load_graph(buf)


@pytest.fixture(scope="session")
def client(graph, store):
    return TestClient(create_app(ServiceData(graph=graph, store=store)))
