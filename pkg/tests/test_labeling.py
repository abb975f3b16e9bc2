import pytest

from dmwl import (
    DMList,
    EntityTagger,
    Polarity,
    Sentence,
    build_index,
    extract_weak_labels,
    general_dm_list,
    make_entry,
    match_dm_prefix,
    read_examples,
    tokenize,
    write_examples,
)
from dmwl.errors import SchemaError


def sentence_from(text, sent_id="s0", source="j1"):
    return Sentence(
        sent_id=sent_id,
        text=text,
        tokens=tuple(tokenize(text)),
        doc_id="d0",
        source=source,
    )


class TestMatchDmPrefix:
    def test_strips_marker_and_comma(self):
        sentence = sentence_from("Sadly, the market fell.")
        dm = make_entry("sadly", Polarity.NEGATIVE)
        assert match_dm_prefix(sentence, dm) == "the market fell."

    def test_no_comma_no_match(self):
        sentence = sentence_from("Sadly the market fell.")
        dm = make_entry("sadly", Polarity.NEGATIVE)
        assert match_dm_prefix(sentence, dm) is None

    def test_placeholder_matches_tagged_span(self):
        sentence = sentence_from("Starting March 3, output doubled.")
        dm = make_entry("starting DATE", Polarity.POSITIVE)
        assert match_dm_prefix(sentence, dm, EntityTagger()) == "output doubled."

    def test_placeholder_needs_right_entity(self):
        sentence = sentence_from("Starting slowly, output doubled.")
        dm = make_entry("starting DATE", Polarity.POSITIVE)
        assert match_dm_prefix(sentence, dm, EntityTagger()) is None

    def test_case_insensitive_preserves_remainder_casing(self):
        sentence = sentence_from("SADLY, McAllister lost.")
        dm = make_entry("sadly", Polarity.NEGATIVE)
        assert match_dm_prefix(sentence, dm) == "McAllister lost."

    def test_mid_sentence_marker_does_not_match(self):
        sentence = sentence_from("The day went, sadly, poorly.")
        dm = make_entry("sadly", Polarity.NEGATIVE)
        assert match_dm_prefix(sentence, dm) is None

    def test_comma_fused_into_chunk_is_not_a_comma_token(self):
        # "Sadly,the" keeps its interior comma, so there is no comma token
        # after the opening and the marker cannot match.
        sentence = sentence_from("Sadly,the market fell.")
        dm = make_entry("sadly", Polarity.NEGATIVE)
        assert match_dm_prefix(sentence, dm) is None

    def test_multi_token_surface(self):
        sentence = sentence_from("In fact, rates held steady.")
        dm = make_entry("in fact", Polarity.POSITIVE)
        assert match_dm_prefix(sentence, dm) == "rates held steady."


class TestExtractWeakLabels:
    def test_fixture_counts(self, fixture_docs):
        index = build_index(fixture_docs)
        examples = extract_weak_labels(index, general_dm_list())
        assert len(examples) == 8
        assert sum(1 for e in examples if e.label == Polarity.POSITIVE) == 5
        assert sum(1 for e in examples if e.label == Polarity.NEGATIVE) == 3

    def test_empty_marker_list(self, fixture_docs):
        index = build_index(fixture_docs)
        assert extract_weak_labels(index, DMList(name="empty", entries=[])) == []

    def test_only_opening_marker_matches(self):
        from dmwl import Document

        doc = Document(doc_id="d", text="Unfortunately, sadly is a word.", source="j")
        index = build_index([doc])
        examples = extract_weak_labels(index, general_dm_list())
        assert len(examples) == 1
        assert examples[0].dm == "unfortunately"
        assert examples[0].label == Polarity.NEGATIVE

    def test_longest_surface_wins(self):
        from dmwl import Document

        doc = Document(doc_id="d", text="On March 3, the party was held.", source="j")
        index = build_index([doc])
        dms = DMList(
            name="both",
            entries=[
                make_entry("on DATE", Polarity.NEGATIVE),
                make_entry("on march 3", Polarity.POSITIVE),
            ],
        )
        examples = extract_weak_labels(index, dms)
        assert len(examples) == 1
        assert examples[0].dm == "on march 3"
        assert examples[0].label == Polarity.POSITIVE

    def test_label_fidelity_and_strip_invariants(self, fixture_docs):
        index = build_index(fixture_docs)
        dms = general_dm_list()
        by_surface = {e.surface: e.polarity for e in dms.entries}
        examples = extract_weak_labels(index, dms)
        assert len(examples) <= len(index.sentences)
        for ex in examples:
            assert ex.label == by_surface[ex.dm]
            original = index.sentences[ex.sent_id].text
            assert original.lower().startswith(ex.dm + ",")
            assert ex.text == original.partition(",")[2].lstrip()
            assert ex.text and not ex.text.startswith(",")
            assert not ex.text[0].isspace()

    def test_deterministic_order(self, fixture_docs):
        index = build_index(fixture_docs)
        first = extract_weak_labels(index, general_dm_list())
        second = extract_weak_labels(index, general_dm_list())
        assert first == second
        assert [e.sent_id for e in first] == sorted(e.sent_id for e in first)

    def test_strategy_tag_passthrough(self, fixture_docs):
        index = build_index(fixture_docs)
        examples = extract_weak_labels(index, general_dm_list(), strategy="general-dm")
        assert all(e.strategy == "general-dm" for e in examples)


class TestExampleIO:
    def test_round_trip(self, fixture_docs, tmp_path):
        index = build_index(fixture_docs)
        examples = extract_weak_labels(index, general_dm_list())
        path = tmp_path / "examples.jsonl"
        write_examples(path, examples)
        assert read_examples(path) == examples

    def test_corrupt_line_names_line_number(self, tmp_path):
        path = tmp_path / "bad.jsonl"
        path.write_text(
            '{"text":"a","label":"positive","sent_id":"s","dm":null,"score":null,"strategy":"dm"}\n'
            "{broken\n",
            encoding="utf-8",
        )
        with pytest.raises(SchemaError) as exc:
            read_examples(path)
        assert "line 2" in str(exc.value)

    def test_unknown_field_rejected(self, tmp_path):
        path = tmp_path / "bad.jsonl"
        path.write_text(
            '{"text":"a","label":"positive","sent_id":"s","dm":null,"score":null,'
            '"strategy":"dm","extra":1}\n',
            encoding="utf-8",
        )
        with pytest.raises(SchemaError):
            read_examples(path)
