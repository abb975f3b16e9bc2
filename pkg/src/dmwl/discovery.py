"""Discovery of domain-specific sentiment markers by enrichment analysis.

Candidates are the most frequent comma-adjacent opening n-grams (entity
spans collapsed to placeholders). Each surviving candidate gets a seeded
sample of its sentences scored; a candidate is selected when one class
dominates the assigned sample (>= 85% by default) and the hypergeometric
tail against the pooled candidate population stays under alpha after
Bonferroni correction.
"""

from __future__ import annotations

import hashlib
import json
import logging
import math
import random
from dataclasses import dataclass, field, replace

from .entities import EntityTagger, normalize_pattern
from .errors import MissingScorerError, SchemaError
from .index import SentenceIndex
from .markers import DMEntry, DMList, Polarity
from .scoring import (
    Assignment,
    ConfidenceScorer,
    HighConfidenceThresholds,
    classify_high_confidence,
)
from .stats import bonferroni, hypergeom_sf, shannon_entropy

logger = logging.getLogger(__name__)

REJECT_NO_SENTENCES = "NoSentences"
REJECT_TOO_FEW_ASSIGNED = "TooFewAssigned"
REJECT_TOO_REPETITIVE = "TooRepetitive"
REJECT_MAJORITY_TOO_LOW = "MajorityTooLow"
REJECT_NOT_SIGNIFICANT = "NotSignificant"


@dataclass(frozen=True)
class DiscoveryConfig:
    """Knobs of the discovery pipeline with the published defaults."""

    top_k: int = 1000
    sample_size: int = 1000
    min_assigned: int = 30
    majority_min: float = 0.85
    alpha: float = 0.01
    entropy_drop_fraction: float = 0.30
    repetitiveness_min_unique: float = 0.5
    thresholds: HighConfidenceThresholds = field(default_factory=HighConfidenceThresholds)
    rng_seed: int = 0

    def __post_init__(self):
        for name in ("majority_min", "alpha", "entropy_drop_fraction", "repetitiveness_min_unique"):
            value = getattr(self, name)
            if not (0.0 <= value <= 1.0):
                raise ValueError(f"{name} outside [0, 1]: {value}")
        if not (self.sample_size >= self.min_assigned >= 1):
            raise ValueError(
                f"need sample_size >= min_assigned >= 1, got {self.sample_size}/{self.min_assigned}"
            )


@dataclass
class CandidateDM:
    """A candidate opening pattern and the sentences that support it."""

    pattern: str
    frequency: int
    source_entropy: float
    sent_ids: list[str]
    sources: dict[str, int] = field(default_factory=dict)


@dataclass
class EnrichmentResult:
    """Everything the enrichment decision for one candidate rests on."""

    candidate: CandidateDM
    sampled: int
    assigned_pos: int
    assigned_neg: int
    undecided: int
    majority_class: Polarity | None
    majority_fraction: float
    p_raw: float | None
    p_corrected: float | None
    decision: str  # "selected" | "rejected"
    polarity: Polarity | None = None
    reason: str | None = None

    @property
    def selected(self) -> bool:
        return self.decision == "selected"


def extract_candidates(index: SentenceIndex, ner: EntityTagger, cfg: DiscoveryConfig) -> list[CandidateDM]:
    """Collect and rank opening patterns after entity normalization.

    Literal prefixes that normalize to the same pattern pool their
    sentences and source counts; the top_k most frequent patterns are kept,
    ties broken lexicographically.
    """
    groups: dict[str, dict] = {}
    for key, sent_ids in index.prefix_map.items():
        pattern = " ".join(normalize_pattern(key.split(" "), ner))
        group = groups.setdefault(pattern, {"sent_ids": set(), "sources": {}})
        group["sent_ids"].update(sent_ids)
        for source, count in index.source_counts.get(key, {}).items():
            group["sources"][source] = group["sources"].get(source, 0) + count

    ranked = sorted(groups.items(), key=lambda kv: (-len(kv[1]["sent_ids"]), kv[0]))
    out = []
    for pattern, group in ranked[: cfg.top_k]:
        sources = dict(sorted(group["sources"].items()))
        out.append(
            CandidateDM(
                pattern=pattern,
                frequency=len(group["sent_ids"]),
                source_entropy=shannon_entropy(sources.values()) if sources else 0.0,
                sent_ids=sorted(group["sent_ids"]),
                sources=sources,
            )
        )
    return out


def entropy_filter(candidates, index: SentenceIndex, fraction: float) -> list[CandidateDM]:
    """Drop exactly floor(fraction * n) candidates with the lowest source entropy.

    At equal entropy the lexicographically smaller pattern is kept. Input
    order is preserved for the survivors.
    """
    candidates = list(candidates)
    n_drop = math.floor(fraction * len(candidates))
    if n_drop <= 0:
        return candidates
    entropies = [shannon_entropy(c.sources.values()) if c.sources else 0.0 for c in candidates]
    order = sorted(range(len(candidates)), key=lambda i: (-entropies[i], candidates[i].pattern))
    keep = set(order[: len(candidates) - n_drop])
    return [c for i, c in enumerate(candidates) if i in keep]


def company_mention_filter(sent_ids, index: SentenceIndex, gazetteer) -> list[str]:
    """Keep only sentences that mention a gazetteer name (whole-token match)."""
    names = [tuple(n) for n in gazetteer]
    if not names:
        logger.warning("company filter enabled with an empty gazetteer; nothing passes")
        return []
    by_len: dict[int, set[tuple[str, ...]]] = {}
    for name in names:
        by_len.setdefault(len(name), set()).add(name)
    kept = []
    for sent_id in sorted(sent_ids):
        lowered = [t.lower() for t in index.sentences[sent_id].tokens]
        found = False
        for length, name_set in by_len.items():
            for i in range(0, len(lowered) - length + 1):
                if tuple(lowered[i : i + length]) in name_set:
                    found = True
                    break
            if found:
                break
        if found:
            kept.append(sent_id)
    return kept


def _candidate_rng(seed: int, pattern: str) -> random.Random:
    digest = hashlib.sha256(f"{seed}|{pattern}".encode("utf-8")).digest()
    return random.Random(int.from_bytes(digest[:8], "big"))


def sample_for_dm(candidate: CandidateDM, index: SentenceIndex, cfg: DiscoveryConfig) -> list[tuple[str, str]]:
    """Seeded uniform sample without replacement of (sent_id, stripped text).

    The RNG is derived from (rng_seed, pattern) over the sorted sentence
    ids, so the sample is independent of corpus order and of which other
    candidates are being analyzed.
    """
    pool = sorted(candidate.sent_ids)
    size = min(cfg.sample_size, len(pool))
    rng = _candidate_rng(cfg.rng_seed, candidate.pattern)
    chosen = rng.sample(pool, size)
    out = []
    for sent_id in chosen:
        text = index.sentences[sent_id].text
        _, _, remainder = text.partition(",")
        out.append((sent_id, remainder.lstrip()))
    return out


def repetitiveness_ok(texts, cfg: DiscoveryConfig) -> bool:
    """True when the distinct-text ratio is at least the configured floor."""
    texts = list(texts)
    if not texts:
        return False
    return len(set(texts)) / len(texts) >= cfg.repetitiveness_min_unique


def _assign_counts(texts, scorer: ConfidenceScorer, thresholds: HighConfidenceThresholds):
    scores = scorer.score_batch(list(texts))
    pos = neg = 0
    for s in scores:
        assignment = classify_high_confidence(s, thresholds)
        if assignment == Assignment.POSITIVE:
            pos += 1
        elif assignment == Assignment.NEGATIVE:
            neg += 1
    return pos, neg


def analyze_candidate(
    candidate: CandidateDM,
    sample,
    scorer: ConfidenceScorer,
    population: tuple[int, int, int],
    m_tests: int,
    cfg: DiscoveryConfig,
) -> EnrichmentResult:
    """Score a candidate's sample and decide enrichment.

    population is (N, K_pos, K_neg): the pooled assigned counts across every
    analyzed candidate. The candidate is selected when its majority class
    passes the majority floor and the Bonferroni-corrected hypergeometric
    upper tail is below alpha.
    """
    texts = [text for _, text in sample]
    pos, neg = _assign_counts(texts, scorer, cfg.thresholds)
    assigned = pos + neg
    base = dict(
        candidate=candidate,
        sampled=len(texts),
        assigned_pos=pos,
        assigned_neg=neg,
        undecided=len(texts) - assigned,
    )
    if pos > neg:
        majority: Polarity | None = Polarity.POSITIVE
    elif neg > pos:
        majority = Polarity.NEGATIVE
    else:
        majority = None
    fraction = max(pos, neg) / assigned if assigned else 0.0

    def rejected(reason, p_raw=None, p_corrected=None):
        return EnrichmentResult(
            **base,
            majority_class=majority,
            majority_fraction=fraction,
            p_raw=p_raw,
            p_corrected=p_corrected,
            decision="rejected",
            reason=reason,
        )

    if assigned < cfg.min_assigned:
        return rejected(REJECT_TOO_FEW_ASSIGNED)
    if not repetitiveness_ok(texts, cfg):
        return rejected(REJECT_TOO_REPETITIVE)
    if majority is None or fraction < cfg.majority_min:
        return rejected(REJECT_MAJORITY_TOO_LOW)

    total, pool_pos, pool_neg = population
    k = max(pos, neg)
    marked = pool_pos if majority == Polarity.POSITIVE else pool_neg
    p_raw = hypergeom_sf(k, total, marked, assigned)
    p_corrected = bonferroni(p_raw, m_tests)
    if p_corrected < cfg.alpha:
        return EnrichmentResult(
            **base,
            majority_class=majority,
            majority_fraction=fraction,
            p_raw=p_raw,
            p_corrected=p_corrected,
            decision="selected",
            polarity=majority,
        )
    return rejected(REJECT_NOT_SIGNIFICANT, p_raw, p_corrected)


class _MemoScorer(ConfidenceScorer):
    """Caches scores per text so the pooling pass and analysis pass agree
    without paying for a second model call."""

    def __init__(self, inner: ConfidenceScorer):
        self.inner = inner
        self.name = inner.name
        self._cache: dict[str, float] = {}

    def score_batch(self, texts) -> list[float]:
        texts = list(texts)
        missing = [t for t in texts if t not in self._cache]
        # preserve first-seen order, dedupe repeats within the batch
        seen = set()
        ordered_missing = [t for t in missing if not (t in seen or seen.add(t))]
        if ordered_missing:
            for text, score in zip(ordered_missing, self.inner.score_batch(ordered_missing)):
                self._cache[text] = score
        return [self._cache[t] for t in texts]


def discover_domain_dms(
    index: SentenceIndex,
    scorer: ConfidenceScorer,
    ner: EntityTagger | None = None,
    cfg: DiscoveryConfig | None = None,
    gazetteer=None,
    domain: str = "domain",
) -> tuple[DMList, list[EnrichmentResult]]:
    """Run the full discovery pipeline and return (marker list, audit report).

    Steps: candidate extraction, entropy filter, optional company-mention
    filter on each candidate's sentences, then per-candidate sampling and
    enrichment analysis with m = 2 * (candidates analyzed). The report
    carries one result per candidate, sorted by pattern.
    """
    if scorer is None:
        raise MissingScorerError("discovery needs a confidence scorer")
    ner = ner or EntityTagger()
    cfg = cfg or DiscoveryConfig()

    candidates = extract_candidates(index, ner, cfg)
    candidates = entropy_filter(candidates, index, cfg.entropy_drop_fraction)

    results: list[EnrichmentResult] = []
    analyzed: list[CandidateDM] = []
    if gazetteer is not None:
        for candidate in candidates:
            kept = company_mention_filter(candidate.sent_ids, index, gazetteer)
            if kept:
                # sources/entropy keep the pre-filter distribution; only the
                # sentence pool and its size shrink
                analyzed.append(replace(candidate, sent_ids=kept, frequency=len(kept)))
            else:
                results.append(
                    EnrichmentResult(
                        candidate=candidate,
                        sampled=0,
                        assigned_pos=0,
                        assigned_neg=0,
                        undecided=0,
                        majority_class=None,
                        majority_fraction=0.0,
                        p_raw=None,
                        p_corrected=None,
                        decision="rejected",
                        reason=REJECT_NO_SENTENCES,
                    )
                )
    else:
        analyzed = list(candidates)

    memo = _MemoScorer(scorer)
    samples = {c.pattern: sample_for_dm(c, index, cfg) for c in analyzed}

    # Pooling pass: population counts over every analyzed candidate.
    total = pool_pos = pool_neg = 0
    for candidate in analyzed:
        pos, neg = _assign_counts([t for _, t in samples[candidate.pattern]], memo, cfg.thresholds)
        total += pos + neg
        pool_pos += pos
        pool_neg += neg

    m_tests = max(1, 2 * len(analyzed))
    for candidate in analyzed:
        results.append(
            analyze_candidate(
                candidate, samples[candidate.pattern], memo, (total, pool_pos, pool_neg), m_tests, cfg
            )
        )

    results.sort(key=lambda r: r.candidate.pattern)
    entries = [
        DMEntry(r.candidate.pattern, r.polarity)
        for r in results
        if r.selected and r.polarity is not None
    ]
    return DMList(name=f"L_{domain}", entries=entries), results


def result_to_json(result: EnrichmentResult) -> str:
    return json.dumps(
        {
            "pattern": result.candidate.pattern,
            "frequency": result.candidate.frequency,
            "source_entropy": result.candidate.source_entropy,
            "sampled": result.sampled,
            "assigned_pos": result.assigned_pos,
            "assigned_neg": result.assigned_neg,
            "undecided": result.undecided,
            "majority_class": result.majority_class.value if result.majority_class else None,
            "majority_fraction": result.majority_fraction,
            "p_raw": result.p_raw,
            "p_corrected": result.p_corrected,
            "decision": result.decision,
            "polarity": result.polarity.value if result.polarity else None,
            "reason": result.reason,
        },
        ensure_ascii=False,
        sort_keys=True,
        separators=(",", ":"),
    )


def write_report(path, results) -> None:
    with open(path, "w", encoding="utf-8") as f:
        for result in results:
            f.write(result_to_json(result) + "\n")


def read_report(path) -> list[dict]:
    """Raw report rows for summaries; full objects are not reconstructed."""
    rows = []
    with open(path, encoding="utf-8") as f:
        for lineno, line in enumerate(f, start=1):
            if not line.strip():
                continue
            try:
                rows.append(json.loads(line))
            except json.JSONDecodeError as e:
                raise SchemaError(f"report line is not valid JSON: {e}", line=lineno) from e
    return rows
