"""Sentence index keyed by comma-adjacent opening n-grams.

A sentence whose first comma sits after its first, second, or third token is
filed under the lowercased join of the tokens before that comma. Openings
that themselves contain a comma character (e.g. a "1,000" token) are never
usable as marker patterns, so they get no key.
"""

from __future__ import annotations

import json
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

from .corpus import Document, FilterConfig, Sentence, filter_sentence, split_sentences
from .errors import DuplicateDocIdError, SchemaError

INDEX_FORMAT = "dmwl-index"
INDEX_VERSION = 1

MAX_PREFIX_TOKENS = 3


def opening_prefix(tokens) -> str | None:
    """Lowercased opening n-gram of a token list, or None when not comma-adjacent."""
    limit = min(MAX_PREFIX_TOKENS + 1, len(tokens))
    for j in range(1, limit):
        if tokens[j] == ",":
            key = " ".join(tokens[:j]).lower()
            return None if "," in key else key
        if "," in tokens[j - 1]:
            return None
    return None


@dataclass
class SentenceIndex:
    """Accepted sentences plus the prefix and per-source lookup tables."""

    sentences: dict[str, Sentence]
    prefix_map: dict[str, set[str]]
    source_counts: dict[str, dict[str, int]]
    filter_config: FilterConfig = field(default_factory=FilterConfig)

    @classmethod
    def from_sentences(cls, sentences, filter_config: FilterConfig | None = None) -> "SentenceIndex":
        by_id: dict[str, Sentence] = {}
        prefix_map: dict[str, set[str]] = {}
        source_counts: dict[str, dict[str, int]] = {}
        for sent in sentences:
            by_id[sent.sent_id] = sent
            key = opening_prefix(sent.tokens)
            if key is None:
                continue
            prefix_map.setdefault(key, set()).add(sent.sent_id)
            per_source = source_counts.setdefault(key, {})
            per_source[sent.source] = per_source.get(sent.source, 0) + 1
        return cls(by_id, prefix_map, source_counts, filter_config or FilterConfig())

    def __len__(self) -> int:
        return len(self.sentences)


def _sentences_of(doc: Document, cfg: FilterConfig, language_scorer=None) -> list[Sentence]:
    out: list[Sentence] = []
    for pos, raw in enumerate(split_sentences(doc.text)):
        result = filter_sentence(raw, cfg, language_scorer)
        if result.accepted:
            out.append(
                Sentence(
                    sent_id=f"{doc.doc_id}#s{pos:04d}",
                    text=raw,
                    tokens=result.tokens,
                    doc_id=doc.doc_id,
                    source=doc.source,
                    topic=doc.topic,
                )
            )
    return out


def build_index(docs, cfg: FilterConfig | None = None, jobs: int = 1, language_scorer=None) -> SentenceIndex:
    """Filter a corpus and index it; deterministic for a given input order.

    With jobs > 1 documents are filtered in parallel and merged back in
    input order, so the result is identical for any job count.
    """
    cfg = cfg or FilterConfig()
    docs = list(docs)
    seen: set[str] = set()
    for doc in docs:
        if doc.doc_id in seen:
            raise DuplicateDocIdError(f"doc_id appears twice: {doc.doc_id!r}")
        seen.add(doc.doc_id)

    if jobs > 1 and len(docs) > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            per_doc = list(pool.map(lambda d: _sentences_of(d, cfg, language_scorer), docs))
    else:
        per_doc = [_sentences_of(d, cfg, language_scorer) for d in docs]

    all_sentences = [s for group in per_doc for s in group]
    return SentenceIndex.from_sentences(all_sentences, cfg)


def save_index(path, index: SentenceIndex) -> None:
    """Serialize to a single JSON file; byte-stable across round-trips."""
    payload = {
        "format": INDEX_FORMAT,
        "version": INDEX_VERSION,
        "filter": {
            "min_tokens": index.filter_config.min_tokens,
            "max_tokens": index.filter_config.max_tokens,
            "lang_threshold": index.filter_config.lang_threshold,
            "require_balanced": index.filter_config.require_balanced,
        },
        "sentences": [
            {
                "sent_id": s.sent_id,
                "text": s.text,
                "tokens": list(s.tokens),
                "doc_id": s.doc_id,
                "source": s.source,
                "topic": s.topic,
            }
            for s in index.sentences.values()
        ],
    }
    with open(path, "w", encoding="utf-8") as f:
        f.write(json.dumps(payload, ensure_ascii=False, sort_keys=True, separators=(",", ":")))
        f.write("\n")


def load_index(path) -> SentenceIndex:
    with open(path, encoding="utf-8") as f:
        try:
            payload = json.load(f)
        except json.JSONDecodeError as e:
            raise SchemaError(f"index file is not valid JSON: {e}") from e
    if not isinstance(payload, dict) or payload.get("format") != INDEX_FORMAT:
        raise SchemaError("not a sentence index file")
    if payload.get("version") != INDEX_VERSION:
        raise SchemaError(f"unsupported index version: {payload.get('version')!r}")
    try:
        cfg = FilterConfig(**payload["filter"])
        sentences = [
            Sentence(
                sent_id=s["sent_id"],
                text=s["text"],
                tokens=tuple(s["tokens"]),
                doc_id=s["doc_id"],
                source=s["source"],
                topic=s.get("topic"),
            )
            for s in payload["sentences"]
        ]
    except (KeyError, TypeError) as e:
        raise SchemaError(f"malformed index payload: {e}") from e
    return SentenceIndex.from_sentences(sentences, cfg)
