import pytest
from sklearn.base import clone
from sklearn.exceptions import NotFittedError

from dmwl import (
    DomainMarkerDiscovery,
    LexiconScorer,
    PlantSpec,
    Polarity,
    WeakLabelExtractor,
    generate,
)
from dmwl.errors import MissingScorerError
from dmwl.synth import DEFAULT_SYNTH_LEXICON


class TestWeakLabelExtractor:
    def test_get_set_params_round_trip(self):
        extractor = WeakLabelExtractor(min_tokens=4, strategy="general-dm")
        params = extractor.get_params()
        assert params["min_tokens"] == 4
        extractor.set_params(min_tokens=5)
        assert extractor.min_tokens == 5

    def test_clone(self):
        extractor = WeakLabelExtractor(lang_threshold=0.6)
        cloned = clone(extractor)
        assert cloned.get_params() == extractor.get_params()

    def test_fit_transform_on_documents(self, fixture_docs):
        extractor = WeakLabelExtractor()
        examples = extractor.fit_transform(fixture_docs)
        assert len(examples) == 8

    def test_accepts_mappings(self, fixture_docs):
        raw = [
            {"doc_id": d.doc_id, "text": d.text, "source": d.source, "topic": d.topic}
            for d in fixture_docs
        ]
        assert len(WeakLabelExtractor().transform(raw)) == 8

    def test_invalid_strategy_rejected(self, fixture_docs):
        with pytest.raises(ValueError):
            WeakLabelExtractor(strategy="nope").fit(fixture_docs)


@pytest.fixture(scope="module")
def corpus():
    specs = [
        PlantSpec("oddly", Polarity.NEGATIVE, purity=0.95, count=100),
        PlantSpec("remarkably", Polarity.POSITIVE, purity=0.95, count=100),
    ]
    return generate(specs, background_count=1200, seed=0)


class TestDomainMarkerDiscovery:

    def test_unfitted_transform_raises(self, corpus):
        est = DomainMarkerDiscovery(scorer=LexiconScorer(DEFAULT_SYNTH_LEXICON))
        with pytest.raises(NotFittedError):
            est.transform(corpus)

    def test_fit_requires_scorer(self, corpus):
        with pytest.raises(MissingScorerError):
            DomainMarkerDiscovery().fit(corpus)

    def test_fit_learns_planted_markers(self, corpus):
        est = DomainMarkerDiscovery(
            scorer=LexiconScorer(DEFAULT_SYNTH_LEXICON),
            domain="toy",
            sample_size=200,
            min_assigned=30,
            seed=0,
        )
        est.fit(corpus)
        assert est.dm_list_.name == "L_toy"
        found = {e.surface: e.polarity for e in est.dm_list_.entries}
        assert found == {"oddly": Polarity.NEGATIVE, "remarkably": Polarity.POSITIVE}
        assert est.n_candidates_ == len(est.report_)

    def test_transform_labels_with_learned_list(self, corpus):
        est = DomainMarkerDiscovery(
            scorer=LexiconScorer(DEFAULT_SYNTH_LEXICON),
            sample_size=200,
            min_assigned=30,
            seed=0,
        )
        examples = est.fit_transform(corpus)
        assert len(examples) == 200
        assert {e.dm for e in examples} == {"oddly", "remarkably"}
        assert all(e.strategy == "domain-dm" for e in examples)

    def test_clone_resets_fitted_state(self, corpus):
        est = DomainMarkerDiscovery(
            scorer=LexiconScorer(DEFAULT_SYNTH_LEXICON), sample_size=200, min_assigned=30
        )
        est.fit(corpus)
        cloned = clone(est)
        assert not hasattr(cloned, "dm_list_")
        assert cloned.sample_size == 200
