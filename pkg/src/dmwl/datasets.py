"""Dataset strategies, deterministic splitting, and file round-trips.

Five strategies build a weakly labeled dataset from one index: marker
extraction with the general or the domain list, pure self-training from a
scorer's high-confidence predictions, and the two synergy variants that
keep a marker example only when the scorer agrees with it.
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass, replace
from enum import Enum

from .entities import EntityTagger
from .errors import EmptyDatasetError, MissingDMListError, MissingScorerError, SchemaError
from .index import SentenceIndex
from .labeling import WeaklyLabeledExample, example_from_json, example_to_json, extract_weak_labels
from .markers import DMList, Polarity, general_dm_list
from .scoring import (
    Assignment,
    ConfidenceScorer,
    HighConfidenceThresholds,
    classify_high_confidence,
)

DATASET_FORMAT = "dmwl-dataset"
DATASET_VERSION = 1


class Strategy(str, Enum):
    GENERAL_DM = "general-dm"
    DOMAIN_DM = "domain-dm"
    SELF_TRAIN = "self-train"
    GENERAL_DM_PLUS_SELF = "general-dm+self"
    DOMAIN_DM_PLUS_SELF = "domain-dm+self"


_DM_STRATEGIES = {Strategy.GENERAL_DM, Strategy.DOMAIN_DM}
_SYNERGY_STRATEGIES = {Strategy.GENERAL_DM_PLUS_SELF, Strategy.DOMAIN_DM_PLUS_SELF}
_GENERAL_LIST_STRATEGIES = {Strategy.GENERAL_DM, Strategy.GENERAL_DM_PLUS_SELF}
_SCORER_STRATEGIES = {Strategy.SELF_TRAIN} | _SYNERGY_STRATEGIES


@dataclass(frozen=True)
class Provenance:
    corpus: str
    dm_lists: tuple[str, ...]
    scorer: str | None
    seed: int


@dataclass
class Dataset:
    examples: list[WeaklyLabeledExample]
    strategy: Strategy
    provenance: Provenance

    def label_counts(self) -> dict[str, int]:
        counts = {"positive": 0, "negative": 0}
        for ex in self.examples:
            counts[ex.label.value] += 1
        return counts


@dataclass
class DatasetSplit:
    train: list[WeaklyLabeledExample]
    dev: list[WeaklyLabeledExample]
    test: list[WeaklyLabeledExample]


def _assignment_to_polarity(assignment: Assignment) -> Polarity | None:
    if assignment == Assignment.POSITIVE:
        return Polarity.POSITIVE
    if assignment == Assignment.NEGATIVE:
        return Polarity.NEGATIVE
    return None


def build_dataset(
    strategy: Strategy | str,
    index: SentenceIndex,
    general_dms: DMList | None = None,
    domain_dms: DMList | None = None,
    scorer: ConfidenceScorer | None = None,
    thresholds: HighConfidenceThresholds | None = None,
    ner: EntityTagger | None = None,
    corpus_name: str = "",
    seed: int = 0,
) -> Dataset:
    """Build one dataset with the requested strategy.

    The general list defaults to the shipped fixture; strategies that need
    the domain list or a scorer raise when those are missing. Self-training
    keeps the sentence text verbatim; marker strategies and the synergy
    variants carry the marker-stripped text.
    """
    strategy = Strategy(strategy)
    thresholds = thresholds or HighConfidenceThresholds()

    dm_list: DMList | None = None
    if strategy in _DM_STRATEGIES | _SYNERGY_STRATEGIES:
        if strategy in _GENERAL_LIST_STRATEGIES:
            dm_list = general_dms or general_dm_list()
        else:
            dm_list = domain_dms
            if dm_list is None:
                raise MissingDMListError(f"strategy {strategy.value!r} needs a domain marker list")
    if strategy in _SCORER_STRATEGIES and scorer is None:
        raise MissingScorerError(f"strategy {strategy.value!r} needs a scorer")

    if strategy in _DM_STRATEGIES:
        examples = extract_weak_labels(index, dm_list, ner, strategy=strategy.value)
    elif strategy == Strategy.SELF_TRAIN:
        sent_ids = sorted(index.sentences)
        texts = [index.sentences[sid].text for sid in sent_ids]
        scores = scorer.score_batch(texts)
        examples = []
        for sent_id, text, score in zip(sent_ids, texts, scores):
            label = _assignment_to_polarity(classify_high_confidence(score, thresholds))
            if label is not None:
                examples.append(
                    WeaklyLabeledExample(
                        text=text,
                        label=label,
                        sent_id=sent_id,
                        dm=None,
                        score=score,
                        strategy=strategy.value,
                    )
                )
    else:  # synergy: marker extraction gated by scorer agreement
        base = extract_weak_labels(index, dm_list, ner, strategy=strategy.value)
        scores = scorer.score_batch([ex.text for ex in base])
        examples = []
        for ex, score in zip(base, scores):
            assignment = _assignment_to_polarity(classify_high_confidence(score, thresholds))
            if assignment == ex.label:
                examples.append(replace(ex, score=score))

    dm_names = (dm_list.name,) if dm_list is not None else ()
    return Dataset(
        examples=examples,
        strategy=strategy,
        provenance=Provenance(
            corpus=corpus_name,
            dm_lists=dm_names,
            scorer=scorer.name if strategy in _SCORER_STRATEGIES else None,
            seed=seed,
        ),
    )


def split_dataset(dataset: Dataset, seed: int = 0) -> DatasetSplit:
    """Seeded 80/10/10 split: floor(.8n) train, floor(.1n) dev, rest test."""
    n = len(dataset.examples)
    if n == 0:
        raise EmptyDatasetError("cannot split an empty dataset")
    ordered = sorted(dataset.examples, key=lambda ex: ex.sent_id)
    random.Random(seed).shuffle(ordered)
    n_train = (8 * n) // 10
    n_dev = n // 10
    return DatasetSplit(
        train=ordered[:n_train],
        dev=ordered[n_train : n_train + n_dev],
        test=ordered[n_train + n_dev :],
    )


_HEADER_FIELDS = {"format", "version", "strategy", "corpus", "dm_lists", "scorer", "seed", "counts"}


def write_dataset(path, dataset: Dataset) -> None:
    """Write the header line plus one example per line."""
    counts = dataset.label_counts()
    header = {
        "format": DATASET_FORMAT,
        "version": DATASET_VERSION,
        "strategy": dataset.strategy.value,
        "corpus": dataset.provenance.corpus,
        "dm_lists": list(dataset.provenance.dm_lists),
        "scorer": dataset.provenance.scorer,
        "seed": dataset.provenance.seed,
        "counts": counts,
    }
    with open(path, "w", encoding="utf-8") as f:
        f.write(json.dumps(header, ensure_ascii=False, sort_keys=True, separators=(",", ":")) + "\n")
        for ex in dataset.examples:
            f.write(example_to_json(ex) + "\n")


def read_dataset(path) -> Dataset:
    with open(path, encoding="utf-8") as f:
        lines = f.readlines()
    if not lines:
        raise SchemaError("dataset file is empty (missing header line)")
    try:
        header = json.loads(lines[0])
    except json.JSONDecodeError as e:
        raise SchemaError(f"header is not valid JSON: {e}", line=1) from e
    if not isinstance(header, dict) or header.get("format") != DATASET_FORMAT:
        raise SchemaError("not a dataset file (bad format field)", line=1)
    if header.get("version") != DATASET_VERSION:
        raise SchemaError(f"unsupported dataset version: {header.get('version')!r}", line=1)
    if set(header) != _HEADER_FIELDS:
        raise SchemaError(
            f"header must have exactly the fields {sorted(_HEADER_FIELDS)}", line=1
        )
    try:
        strategy = Strategy(header["strategy"])
    except ValueError as e:
        raise SchemaError(f"unknown strategy {header['strategy']!r}", line=1) from e

    examples = []
    for lineno, line in enumerate(lines[1:], start=2):
        if line.strip():
            examples.append(example_from_json(line, lineno))

    counts = {"positive": 0, "negative": 0}
    for ex in examples:
        counts[ex.label.value] += 1
    if counts != header["counts"]:
        raise SchemaError(
            f"header counts {header['counts']} do not match recounted {counts}", line=1
        )
    return Dataset(
        examples=examples,
        strategy=strategy,
        provenance=Provenance(
            corpus=header["corpus"],
            dm_lists=tuple(header["dm_lists"]),
            scorer=header["scorer"],
            seed=header["seed"],
        ),
    )


def duplicate_text_rate(dataset: Dataset) -> float:
    """Share of examples whose text also appears on another example."""
    if not dataset.examples:
        return 0.0
    texts = [ex.text for ex in dataset.examples]
    return 1.0 - len(set(texts)) / len(texts)
