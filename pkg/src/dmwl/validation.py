"""Input validation helpers shared by the estimators and the CLI."""

from __future__ import annotations

from .corpus import Document, FilterConfig
from .errors import DataError
from .index import SentenceIndex, build_index


def as_document(obj) -> Document:
    """Coerce a Document or a plain mapping into a Document."""
    if isinstance(obj, Document):
        return obj
    if isinstance(obj, dict):
        try:
            return Document(
                doc_id=obj["doc_id"],
                text=obj["text"],
                source=obj.get("source", ""),
                topic=obj.get("topic"),
                date=obj.get("date"),
            )
        except KeyError as e:
            raise DataError(f"document mapping missing field {e}") from e
    raise DataError(f"cannot interpret {type(obj).__name__} as a document")


def check_documents(X) -> list[Document]:
    """Validate an iterable of documents (or mappings) into Document records."""
    if X is None:
        raise DataError("expected an iterable of documents, got None")
    if isinstance(X, (str, bytes)):
        raise DataError("expected an iterable of documents, got a single string")
    return [as_document(item) for item in X]


def ensure_index(X, filter_config: FilterConfig | None = None, jobs: int = 1) -> SentenceIndex:
    """Pass a SentenceIndex through, or build one from documents."""
    if isinstance(X, SentenceIndex):
        return X
    return build_index(check_documents(X), filter_config, jobs=jobs)
