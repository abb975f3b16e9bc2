"""Scikit-learn style estimators wrapping the pipeline.

WeakLabelExtractor is a stateless transformer (documents in, weakly
labeled examples out); DomainMarkerDiscovery is fit on a domain corpus and
learns a marker list it can then label with. Both expose get_params /
set_params so they compose with sklearn model selection and cloning.
"""

from __future__ import annotations

from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_is_fitted

from .corpus import FilterConfig
from .datasets import Strategy, build_dataset
from .discovery import DiscoveryConfig, discover_domain_dms
from .entities import EntityTagger
from .errors import MissingScorerError
from .scoring import HighConfidenceThresholds
from .validation import ensure_index


class WeakLabelExtractor(BaseEstimator, TransformerMixin):
    """Turn raw documents into weakly labeled sentiment examples.

    Parameters mirror the pipeline knobs: the marker list to match (the
    shipped general list when None), the dataset strategy, and the sentence
    filter settings. `transform` accepts an iterable of documents (or an
    already-built sentence index) and returns a list of examples; `fit` only
    validates parameters, since nothing is learned.
    """

    def __init__(
        self,
        dm_list=None,
        strategy="general-dm",
        scorer=None,
        pos_min=0.9,
        neg_max=0.1,
        min_tokens=3,
        max_tokens=32,
        lang_threshold=0.75,
        require_balanced=True,
        org_gazetteer=None,
    ):
        self.dm_list = dm_list
        self.strategy = strategy
        self.scorer = scorer
        self.pos_min = pos_min
        self.neg_max = neg_max
        self.min_tokens = min_tokens
        self.max_tokens = max_tokens
        self.lang_threshold = lang_threshold
        self.require_balanced = require_balanced
        self.org_gazetteer = org_gazetteer

    def _filter_config(self) -> FilterConfig:
        return FilterConfig(
            min_tokens=self.min_tokens,
            max_tokens=self.max_tokens,
            lang_threshold=self.lang_threshold,
            require_balanced=self.require_balanced,
        )

    def _check_params(self):
        Strategy(self.strategy)
        self._filter_config()
        HighConfidenceThresholds(pos_min=self.pos_min, neg_max=self.neg_max)

    def fit(self, X, y=None):
        self._check_params()
        self.is_fitted_ = True
        return self

    def transform(self, X):
        self._check_params()
        strategy = Strategy(self.strategy)
        index = ensure_index(X, self._filter_config())
        general = domain = None
        if strategy in (Strategy.GENERAL_DM, Strategy.GENERAL_DM_PLUS_SELF):
            general = self.dm_list
        else:
            domain = self.dm_list
        dataset = build_dataset(
            strategy,
            index,
            general_dms=general,
            domain_dms=domain,
            scorer=self.scorer,
            thresholds=HighConfidenceThresholds(pos_min=self.pos_min, neg_max=self.neg_max),
            ner=EntityTagger(self.org_gazetteer),
        )
        return dataset.examples


class DomainMarkerDiscovery(BaseEstimator):
    """Learn a domain-specific sentiment marker list from a corpus.

    `fit` runs the discovery pipeline against the configured scorer and
    stores the resulting list as `dm_list_` with the per-candidate audit in
    `report_`; `transform` then extracts weak labels with the learned list.
    """

    def __init__(
        self,
        scorer=None,
        domain="domain",
        top_k=1000,
        sample_size=1000,
        min_assigned=30,
        majority_min=0.85,
        alpha=0.01,
        entropy_drop_fraction=0.30,
        repetitiveness_min_unique=0.5,
        pos_min=0.9,
        neg_max=0.1,
        seed=0,
        gazetteer=None,
        org_gazetteer=None,
        min_tokens=3,
        max_tokens=32,
        lang_threshold=0.75,
        require_balanced=True,
    ):
        self.scorer = scorer
        self.domain = domain
        self.top_k = top_k
        self.sample_size = sample_size
        self.min_assigned = min_assigned
        self.majority_min = majority_min
        self.alpha = alpha
        self.entropy_drop_fraction = entropy_drop_fraction
        self.repetitiveness_min_unique = repetitiveness_min_unique
        self.pos_min = pos_min
        self.neg_max = neg_max
        self.seed = seed
        self.gazetteer = gazetteer
        self.org_gazetteer = org_gazetteer
        self.min_tokens = min_tokens
        self.max_tokens = max_tokens
        self.lang_threshold = lang_threshold
        self.require_balanced = require_balanced

    def _filter_config(self) -> FilterConfig:
        return FilterConfig(
            min_tokens=self.min_tokens,
            max_tokens=self.max_tokens,
            lang_threshold=self.lang_threshold,
            require_balanced=self.require_balanced,
        )

    def _discovery_config(self) -> DiscoveryConfig:
        return DiscoveryConfig(
            top_k=self.top_k,
            sample_size=self.sample_size,
            min_assigned=self.min_assigned,
            majority_min=self.majority_min,
            alpha=self.alpha,
            entropy_drop_fraction=self.entropy_drop_fraction,
            repetitiveness_min_unique=self.repetitiveness_min_unique,
            thresholds=HighConfidenceThresholds(pos_min=self.pos_min, neg_max=self.neg_max),
            rng_seed=self.seed,
        )

    def fit(self, X, y=None):
        if self.scorer is None:
            raise MissingScorerError("DomainMarkerDiscovery needs a scorer to fit")
        index = ensure_index(X, self._filter_config())
        dm_list, report = discover_domain_dms(
            index,
            self.scorer,
            ner=EntityTagger(self.org_gazetteer),
            cfg=self._discovery_config(),
            gazetteer=self.gazetteer,
            domain=self.domain,
        )
        self.dm_list_ = dm_list
        self.report_ = report
        self.n_candidates_ = len(report)
        return self

    def transform(self, X):
        check_is_fitted(self, "dm_list_")
        extractor = WeakLabelExtractor(
            dm_list=self.dm_list_,
            strategy=Strategy.DOMAIN_DM.value,
            min_tokens=self.min_tokens,
            max_tokens=self.max_tokens,
            lang_threshold=self.lang_threshold,
            require_balanced=self.require_balanced,
            org_gazetteer=self.org_gazetteer,
        )
        return extractor.transform(X)

    def fit_transform(self, X, y=None):
        return self.fit(X, y).transform(X)
