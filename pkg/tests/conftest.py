import pytest
from fastapi.testclient import TestClient

from soas.api import create_app
from soas.pipeline import Pipeline
from soas.store import DocumentStore


@pytest.fixture
def store(tmp_path):
    s = DocumentStore(tmp_path / "data", fsync=False)
    yield s
    s.close()


@pytest.fixture
def pipeline(store):
    return Pipeline(store)


@pytest.fixture
def client(store):
    app = create_app(store)
    with TestClient(app) as c:
        yield c
