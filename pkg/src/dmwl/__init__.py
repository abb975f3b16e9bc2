"""Weakly labeled sentiment data from discourse markers.

The pipeline: ingest and filter a corpus into a sentence index, extract
weak labels by matching sentiment-bearing marker prefixes, discover
domain-specific markers by enrichment analysis against a confidence
scorer, and build/split the five dataset strategies.
"""

from .corpus import (
    Document,
    FilterConfig,
    FilterResult,
    RejectReason,
    Sentence,
    filter_sentence,
    language_score,
    read_documents,
    split_sentences,
    tokenize,
    write_documents,
)
from .datasets import (
    Dataset,
    DatasetSplit,
    Provenance,
    Strategy,
    build_dataset,
    read_dataset,
    split_dataset,
    write_dataset,
)
from .discovery import (
    CandidateDM,
    DiscoveryConfig,
    EnrichmentResult,
    analyze_candidate,
    company_mention_filter,
    discover_domain_dms,
    entropy_filter,
    extract_candidates,
    repetitiveness_ok,
    sample_for_dm,
)
from .entities import EntitySpan, EntityTagger, load_gazetteer, normalize_pattern
from .estimators import DomainMarkerDiscovery, WeakLabelExtractor
from .index import SentenceIndex, build_index, load_index, save_index
from .labeling import (
    WeaklyLabeledExample,
    extract_weak_labels,
    match_dm_prefix,
    read_examples,
    write_examples,
)
from .markers import (
    DMEntry,
    DMList,
    Polarity,
    general_dm_list,
    load_dm_list,
    make_entry,
    save_dm_list,
)
from .scoring import (
    Assignment,
    ConfidenceScorer,
    HighConfidenceThresholds,
    LexiconScorer,
    RemoteScorer,
    classify_high_confidence,
    lexicon_score,
    load_lexicon,
    remote_score_batch,
    resolve_scorer,
    save_lexicon,
)
from .stats import bonferroni, hypergeom_sf, mcnemar_exact, shannon_entropy
from .synth import DEFAULT_SYNTH_LEXICON, PlantSpec, generate, load_plan

__version__ = "0.1.0"

__all__ = [
    "Assignment",
    "CandidateDM",
    "ConfidenceScorer",
    "DEFAULT_SYNTH_LEXICON",
    "DMEntry",
    "DMList",
    "Dataset",
    "DatasetSplit",
    "DiscoveryConfig",
    "Document",
    "DomainMarkerDiscovery",
    "EnrichmentResult",
    "EntitySpan",
    "EntityTagger",
    "FilterConfig",
    "FilterResult",
    "HighConfidenceThresholds",
    "LexiconScorer",
    "PlantSpec",
    "Polarity",
    "Provenance",
    "RejectReason",
    "RemoteScorer",
    "Sentence",
    "SentenceIndex",
    "Strategy",
    "WeakLabelExtractor",
    "WeaklyLabeledExample",
    "analyze_candidate",
    "bonferroni",
    "build_dataset",
    "build_index",
    "classify_high_confidence",
    "company_mention_filter",
    "discover_domain_dms",
    "entropy_filter",
    "extract_candidates",
    "extract_weak_labels",
    "filter_sentence",
    "general_dm_list",
    "generate",
    "hypergeom_sf",
    "language_score",
    "lexicon_score",
    "load_dm_list",
    "load_gazetteer",
    "load_index",
    "load_lexicon",
    "load_plan",
    "make_entry",
    "match_dm_prefix",
    "mcnemar_exact",
    "normalize_pattern",
    "read_dataset",
    "read_documents",
    "read_examples",
    "remote_score_batch",
    "repetitiveness_ok",
    "resolve_scorer",
    "sample_for_dm",
    "save_dm_list",
    "save_index",
    "save_lexicon",
    "shannon_entropy",
    "split_dataset",
    "split_sentences",
    "tokenize",
    "write_dataset",
    "write_documents",
    "write_examples",
]
