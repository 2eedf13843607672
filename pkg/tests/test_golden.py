import importlib.util
import json
from pathlib import Path

import jsonschema
import pytest

GOLDEN_DIR = Path(__file__).parent / "data" / "golden"
QUERIES = json.loads((GOLDEN_DIR / "queries.json").read_text(encoding="utf-8"))
SCHEMA = json.loads(
    (Path(__file__).parent.parent / "schemas" / "digital_payload.schema.json").read_text()
)


def load_generator():
    spec = importlib.util.spec_from_file_location(
        "golden_generate", GOLDEN_DIR / "generate.py"
    )
    module = importlib.util.module_from_spec(spec)
    spec.loader.exec_module(module)
    return module


@pytest.fixture(scope="module")
def transcript_client(tmp_path_factory):
    from fastapi.testclient import TestClient

    from soas.api import create_app
    from soas.store import DocumentStore

    store = DocumentStore(tmp_path_factory.mktemp("golden") / "data", fsync=False)
    client = TestClient(create_app(store))
    report = client.post(
        "/api/documents",
        content=(GOLDEN_DIR / "corpus.ndjson").read_bytes(),
        headers={"Content-Type": "application/x-ndjson"},
    )
    assert report.status_code == 200
    assert report.json() == {"created": 5, "replaced": 0}
    yield client
    store.close()


def masked(payload: dict) -> dict:
    clone = json.loads(json.dumps(payload))
    clone["correlation_id"] = "MASKED"
    return clone


class TestTranscript:
    @pytest.mark.parametrize("query", QUERIES, ids=[q["name"] for q in QUERIES])
    def test_natural_bytes_match(self, transcript_client, query):
        response = transcript_client.post(
            "/api/query", json={"text": query["text"], "mode": "natural"}
        )
        assert response.status_code == 200
        golden = (GOLDEN_DIR / f"{query['name']}.txt").read_bytes()
        assert response.content == golden

    @pytest.mark.parametrize("query", QUERIES, ids=[q["name"] for q in QUERIES])
    def test_digital_payload_matches(self, transcript_client, query):
        response = transcript_client.post(
            "/api/query", json={"text": query["text"], "mode": "digital"}
        )
        assert response.status_code == 200
        payload = response.json()
        jsonschema.validate(payload, SCHEMA)
        golden = json.loads(
            (GOLDEN_DIR / f"{query['name']}.json").read_text(encoding="utf-8")
        )
        assert masked(payload) == golden


class TestGoldensDeriveFromOracle:
    def test_committed_files_match_generator(self):
        generator = load_generator()
        rendered = generator.render_all()
        assert set(rendered) == {q["name"] for q in QUERIES}
        for name, expected in rendered.items():
            committed_txt = (GOLDEN_DIR / f"{name}.txt").read_bytes()
            assert committed_txt == expected["natural"].encode("utf-8"), name
            committed_json = json.loads(
                (GOLDEN_DIR / f"{name}.json").read_text(encoding="utf-8")
            )
            assert committed_json == expected["digital"], name

    def test_texts_match_query_list(self):
        generator = load_generator()
        rendered = generator.render_all()
        for query in QUERIES:
            assert rendered[query["name"]]["text"] == query["text"]
