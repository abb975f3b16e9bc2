import json
from pathlib import Path

import pytest

from dmwl import Document, read_documents

DATA_DIR = Path(__file__).parent / "data"


@pytest.fixture(scope="session")
def fixture_corpus_path() -> Path:
    return DATA_DIR / "fixture_corpus.jsonl"


@pytest.fixture(scope="session")
def fixture_docs(fixture_corpus_path) -> list[Document]:
    return read_documents(fixture_corpus_path)


@pytest.fixture(scope="session")
def parity_cases() -> dict:
    with open(DATA_DIR / "bridge_parity.json", encoding="utf-8") as f:
        return json.load(f)
