"""Weak-label extraction: match marker prefixes, strip them, emit examples."""

from __future__ import annotations

import json
from dataclasses import dataclass

from .corpus import Sentence
from .entities import EntityTagger
from .errors import SchemaError
from .index import SentenceIndex
from .markers import PLACEHOLDER_TOKENS, DMEntry, DMList, Polarity


@dataclass(frozen=True)
class WeaklyLabeledExample:
    """One (text, binary label) record with its provenance."""

    text: str
    label: Polarity
    sent_id: str
    dm: str | None = None
    score: float | None = None
    strategy: str = "dm"


def match_dm_prefix(sentence: Sentence, dm: DMEntry, ner: EntityTagger | None = None) -> str | None:
    """Match a marker against a sentence opening and return the stripped text.

    The opening tokens must equal the marker surface case-insensitively,
    with each placeholder token standing in for a tagged span of that
    entity type, and a comma must follow immediately. On a match the text
    after that comma is returned with leading whitespace removed and the
    original casing intact; otherwise None.
    """
    tokens = sentence.tokens
    dm_tokens = dm.surface.split()
    spans = {}
    if dm.has_placeholders:
        tagger = ner or EntityTagger()
        spans = {s.start: s for s in tagger.tag(tokens)}
    i = 0
    for dm_token in dm_tokens:
        if dm_token in PLACEHOLDER_TOKENS:
            span = spans.get(i)
            if span is None or span.label != dm_token:
                return None
            i = span.end
        else:
            if i >= len(tokens) or tokens[i].lower() != dm_token:
                return None
            i += 1
    if i >= len(tokens) or tokens[i] != ",":
        return None
    # Tokens inside the matched opening must be comma-free so the text-level
    # strip point is the matched comma.
    if any("," in t for t in tokens[:i]):
        return None
    _, _, remainder = sentence.text.partition(",")
    return remainder.lstrip()


def extract_weak_labels(
    index: SentenceIndex,
    dms: DMList,
    ner: EntityTagger | None = None,
    strategy: str = "dm",
) -> list[WeaklyLabeledExample]:
    """One example per sentence whose opening matches a marker.

    When several markers match the same sentence the longest surface wins,
    with ties broken toward the lexicographically smaller surface. Output
    is sorted by sent_id.
    """
    ner = ner or EntityTagger()
    matched: dict[str, list[DMEntry]] = {}

    literal = [dm for dm in dms.entries if not dm.has_placeholders]
    with_placeholders = [dm for dm in dms.entries if dm.has_placeholders]

    for dm in literal:
        for sent_id in index.prefix_map.get(dm.surface, ()):
            matched.setdefault(sent_id, []).append(dm)
    if with_placeholders:
        for sent_id, sentence in index.sentences.items():
            for dm in with_placeholders:
                if match_dm_prefix(sentence, dm, ner) is not None:
                    matched.setdefault(sent_id, []).append(dm)

    examples: list[WeaklyLabeledExample] = []
    for sent_id in sorted(matched):
        best = min(matched[sent_id], key=lambda dm: (-len(dm.surface), dm.surface))
        stripped = match_dm_prefix(index.sentences[sent_id], best, ner)
        # Degenerate matches (nothing after the comma, or another comma right
        # away) would break the example invariants; drop them.
        if not stripped or stripped.startswith(","):
            continue
        examples.append(
            WeaklyLabeledExample(
                text=stripped,
                label=best.polarity,
                sent_id=sent_id,
                dm=best.surface,
                score=None,
                strategy=strategy,
            )
        )
    return examples


def example_to_json(example: WeaklyLabeledExample) -> str:
    return json.dumps(
        {
            "text": example.text,
            "label": example.label.value,
            "sent_id": example.sent_id,
            "dm": example.dm,
            "score": example.score,
            "strategy": example.strategy,
        },
        ensure_ascii=False,
        sort_keys=True,
        separators=(",", ":"),
    )


_EXAMPLE_FIELDS = {"text", "label", "sent_id", "dm", "score", "strategy"}


def example_from_json(line: str, lineno: int | None = None) -> WeaklyLabeledExample:
    try:
        obj = json.loads(line)
    except json.JSONDecodeError as e:
        raise SchemaError(f"example line is not valid JSON: {e}", line=lineno) from e
    if not isinstance(obj, dict) or set(obj) != _EXAMPLE_FIELDS:
        raise SchemaError(
            f"example line must have exactly the fields {sorted(_EXAMPLE_FIELDS)}", line=lineno
        )
    try:
        label = Polarity(obj["label"])
    except ValueError as e:
        raise SchemaError(f"bad label {obj['label']!r}", line=lineno) from e
    score = obj["score"]
    if score is not None:
        score = float(score)
    return WeaklyLabeledExample(
        text=obj["text"],
        label=label,
        sent_id=obj["sent_id"],
        dm=obj["dm"],
        score=score,
        strategy=obj["strategy"],
    )


def write_examples(path, examples) -> None:
    with open(path, "w", encoding="utf-8") as f:
        for ex in examples:
            f.write(example_to_json(ex) + "\n")


def read_examples(path) -> list[WeaklyLabeledExample]:
    out = []
    with open(path, encoding="utf-8") as f:
        for lineno, line in enumerate(f, start=1):
            if line.strip():
                out.append(example_from_json(line, lineno))
    return out
