"""Acceptance suite: one test per criterion, each printing a PASS/FAIL line.

Run with `pytest tests/test_acceptance.py -v -s` to see the per-criterion
lines. The bridge criterion is skipped unless the frontend package has
been built (frontend/dist/cli.js).
"""

import json
import math
import random
import subprocess
import sys
import time
from contextlib import contextmanager
from pathlib import Path

import pytest

from dmwl import (
    DiscoveryConfig,
    LexiconScorer,
    PlantSpec,
    Polarity,
    RejectReason,
    Strategy,
    WeaklyLabeledExample,
    bonferroni,
    build_dataset,
    build_index,
    discover_domain_dms,
    entropy_filter,
    filter_sentence,
    generate,
    hypergeom_sf,
    lexicon_score,
    mcnemar_exact,
    read_examples,
    remote_score_batch,
    save_lexicon,
    shannon_entropy,
    split_dataset,
)
from dmwl.cli import run
from dmwl.datasets import Dataset, Provenance
from dmwl.discovery import CandidateDM
from dmwl.synth import DEFAULT_SYNTH_LEXICON

from oracles import hypergeom_tail_distribution

ROOT = Path(__file__).resolve().parent.parent
BRIDGE_CLI = ROOT / "frontend" / "dist" / "cli.js"


@contextmanager
def criterion(name):
    try:
        yield
    except BaseException:
        print(f"\nACCEPTANCE {name}: FAIL")
        raise
    print(f"\nACCEPTANCE {name}: PASS")


def test_hypergeometric_oracle():
    with criterion("hypergeometric-oracle"):
        started = time.monotonic()
        # exhaustive check against draw enumeration for every N <= 12
        for total in range(0, 13):
            for successes in range(0, total + 1):
                for draws in range(0, total + 1):
                    tails = hypergeom_tail_distribution(total, successes, draws)
                    for k, expected in tails.items():
                        got = hypergeom_sf(k, total, successes, draws)
                        assert abs(got - expected) <= 1e-12, (k, total, successes, draws)
        # randomized larger parameter sets: monotone tail, normalized pmf
        rng = random.Random(20240817)
        for _ in range(1000):
            total = rng.randint(13, 120)
            successes = rng.randint(0, total)
            draws = rng.randint(0, total)
            lo = max(0, draws + successes - total)
            hi = min(draws, successes)
            tail = [hypergeom_sf(k, total, successes, draws) for k in range(lo, hi + 2)]
            assert tail[0] == 1.0 and tail[-1] == 0.0
            for a, b in zip(tail, tail[1:]):
                assert a >= b - 1e-10
            pmf_total = math.fsum(a - b for a, b in zip(tail, tail[1:]))
            assert abs(pmf_total - 1.0) <= 1e-10
        elapsed = time.monotonic() - started
        assert elapsed < 10.0, f"hypergeometric oracle took {elapsed:.1f}s"


def test_statistics_fixtures():
    with criterion("statistics-fixtures"):
        assert abs(shannon_entropy([0.5, 0.25, 0.25]) - 1.039721) <= 1e-6
        assert abs(mcnemar_exact(5, 0) - 0.0625) <= 1e-12
        assert bonferroni(0.7, 5) == 1.0  # clamp
        assert bonferroni(0.123, 1) == 0.123  # identity
        assert bonferroni(0.004, 2) == 0.008


def test_weak_labeling_fidelity(fixture_corpus_path, tmp_path):
    with criterion("weak-labeling-fidelity"):
        index_path = tmp_path / "index.json"
        out_path = tmp_path / "weak.jsonl"
        assert run(["ingest", "--corpus", str(fixture_corpus_path), "--out", str(index_path)]) == 0
        assert run(["extract", "--index", str(index_path), "--dms", "general", "--out", str(out_path)]) == 0
        examples = read_examples(out_path)
        assert len(examples) == 8
        labels = [e.label for e in examples]
        assert labels.count(Polarity.POSITIVE) == 5
        assert labels.count(Polarity.NEGATIVE) == 3
        from dmwl import load_index

        index = load_index(index_path)
        for ex in examples:
            original = index.sentences[ex.sent_id].text
            assert original.lower().startswith(ex.dm + ",")
            assert ex.text == original.partition(",")[2].lstrip()


PLANT_SPECS = [
    PlantSpec("oddly", Polarity.NEGATIVE, purity=0.95, count=500),
    PlantSpec("remarkably", Polarity.POSITIVE, purity=0.95, count=500),
    PlantSpec("by all accounts", Polarity.POSITIVE, purity=0.95, count=500),
]
PLANTED = {
    "oddly": Polarity.NEGATIVE,
    "remarkably": Polarity.POSITIVE,
    "by all accounts": Polarity.POSITIVE,
}


def test_end_to_end_discovery_recovery():
    with criterion("discovery-recovery"):
        started = time.monotonic()
        scorer = LexiconScorer(DEFAULT_SYNTH_LEXICON)
        for seed in range(5):
            docs = generate(PLANT_SPECS, background_count=20000, seed=seed)
            # the corpus must offer enough neutral competitor candidates
            neutral_openers = set()
            for doc in docs:
                head = doc.text.partition(",")[0].lower()
                if head not in PLANTED and 1 <= len(head.split()) <= 3:
                    neutral_openers.add(head)
            assert len(neutral_openers) >= 50
            index = build_index(docs)
            dms, report = discover_domain_dms(
                index, scorer, cfg=DiscoveryConfig(rng_seed=seed), domain="synth"
            )
            found = {e.surface: e.polarity for e in dms.entries}
            assert found == PLANTED, f"seed {seed}: got {found}"  # precision 1.0, recall 3/3
        elapsed = time.monotonic() - started
        assert elapsed < 60.0, f"discovery recovery took {elapsed:.1f}s"


def test_filter_exactness():
    with criterion("filter-exactness"):
        candidates = []
        rng = random.Random(4)
        for i in range(10):
            sources = {f"j{j}": rng.randint(1, 6) for j in range(rng.randint(1, 5))}
            n = sum(sources.values())
            candidates.append(
                CandidateDM(
                    pattern=f"p{i:02d}",
                    frequency=n,
                    source_entropy=shannon_entropy(sources.values()),
                    sent_ids=[f"s{i}-{k}" for k in range(n)],
                    sources=sources,
                )
            )
        kept = entropy_filter(candidates, None, 0.30)
        assert len(kept) == 7
        kept_patterns = {c.pattern for c in kept}
        dropped = [c for c in candidates if c.pattern not in kept_patterns]
        min_kept = min(shannon_entropy(c.sources.values()) for c in kept)
        for c in dropped:
            assert shannon_entropy(c.sources.values()) <= min_kept + 1e-12

        too_short = filter_sentence("Up now.")
        assert not too_short.accepted and too_short.reason == RejectReason.TOO_SHORT
        unbalanced = filter_sentence("The bank (finally failed.")
        assert not unbalanced.accepted and unbalanced.reason == RejectReason.UNBALANCED
        assert filter_sentence("Fortunately, the deal closed early.").accepted


def test_strategy_laws():
    with criterion("strategy-laws"):
        docs = generate(PLANT_SPECS, background_count=4000, seed=1)
        index = build_index(docs)
        scorer = LexiconScorer(DEFAULT_SYNTH_LEXICON)
        dms, _ = discover_domain_dms(index, scorer, cfg=DiscoveryConfig(rng_seed=1), domain="synth")
        assert dms.entries

        plain = build_dataset(Strategy.DOMAIN_DM, index, domain_dms=dms)
        synergy = build_dataset(Strategy.DOMAIN_DM_PLUS_SELF, index, domain_dms=dms, scorer=scorer)
        plain_by_id = {e.sent_id: e for e in plain.examples}
        assert synergy.examples, "synergy dataset should not be empty here"
        for ex in synergy.examples:
            assert ex.sent_id in plain_by_id  # subset law
            assert ex.label == plain_by_id[ex.sent_id].label  # same marker polarity
            assert ex.score is not None
            high_conf = ex.score > 0.9 or ex.score < 0.1
            assert high_conf
            assignment = Polarity.POSITIVE if ex.score > 0.9 else Polarity.NEGATIVE
            assert ex.label == assignment  # label equals the assignment too

        neutral = build_dataset(Strategy.SELF_TRAIN, index, scorer=LexiconScorer({}))
        assert neutral.examples == []


def _run_cli(args, cwd):
    proc = subprocess.run(
        [sys.executable, "-m", "dmwl", *args],
        cwd=cwd,
        stdout=subprocess.PIPE,
        stderr=subprocess.PIPE,
        text=True,
    )
    assert proc.returncode == 0, f"dmwl {' '.join(args)} failed:\n{proc.stderr}"


def _pipeline(workdir: Path, tag: str, seed: int, jobs: int, lexicon_path: Path, plan_path: Path):
    corpus = workdir / f"{tag}-corpus.jsonl"
    index = workdir / f"{tag}-index.json"
    dms = workdir / f"{tag}-dms.json"
    report = workdir / f"{tag}-report.jsonl"
    dataset = workdir / f"{tag}-dataset.jsonl"
    prefix = workdir / f"{tag}-part"
    _run_cli(["synth", "--plan", str(plan_path), "--out", str(corpus), "--seed", str(seed)], workdir)
    _run_cli(["ingest", "--corpus", str(corpus), "--out", str(index), "--jobs", str(jobs)], workdir)
    _run_cli(
        [
            "discover", "--index", str(index), "--scorer", f"lexicon:{lexicon_path}",
            "--out-dms", str(dms), "--report", str(report),
            "--domain", "synth", "--seed", str(seed),
            "--sample-size", "200", "--min-assigned", "30",
        ],
        workdir,
    )
    _run_cli(
        [
            "build", "--strategy", "domain-dm+self", "--index", str(index),
            "--domain-dms", str(dms), "--scorer", f"lexicon:{lexicon_path}",
            "--out", str(dataset), "--seed", str(seed), "--corpus-name", "synth",
        ],
        workdir,
    )
    _run_cli(["split", "--dataset", str(dataset), "--out-prefix", str(prefix), "--seed", str(seed)], workdir)
    outputs = [corpus, index, dms, report, dataset]
    outputs += [workdir / f"{tag}-part.{part}.jsonl" for part in ("train", "dev", "test")]
    return {p.name.split("-", 1)[1]: p.read_bytes() for p in outputs}


def test_pipeline_determinism(tmp_path):
    with criterion("pipeline-determinism"):
        lexicon_path = tmp_path / "lexicon.json"
        save_lexicon(lexicon_path, DEFAULT_SYNTH_LEXICON)
        plan_path = tmp_path / "plan.json"
        plan_path.write_text(
            json.dumps(
                {
                    "specs": [
                        {"dm_pattern": "oddly", "polarity": "negative", "purity": 0.95, "count": 150},
                        {"dm_pattern": "remarkably", "polarity": "positive", "purity": 0.95, "count": 150},
                    ],
                    "background_count": 3000,
                }
            ),
            encoding="utf-8",
        )
        first = _pipeline(tmp_path, "one", seed=11, jobs=1, lexicon_path=lexicon_path, plan_path=plan_path)
        second = _pipeline(tmp_path, "two", seed=11, jobs=1, lexicon_path=lexicon_path, plan_path=plan_path)
        assert first == second  # byte-identical outputs, report included
        parallel = _pipeline(tmp_path, "par", seed=11, jobs=4, lexicon_path=lexicon_path, plan_path=plan_path)
        assert parallel == first  # --jobs 4 equals --jobs 1


def test_split_arithmetic():
    with criterion("split-arithmetic"):
        for n in (7, 10, 1000):
            examples = [
                WeaklyLabeledExample(text=f"t{i}", label=Polarity.POSITIVE, sent_id=f"s{i:05d}")
                for i in range(n)
            ]
            dataset = Dataset(
                examples=examples,
                strategy=Strategy.GENERAL_DM,
                provenance=Provenance("c", ("L_g",), None, 0),
            )
            parts = split_dataset(dataset, seed=n)
            assert len(parts.train) == (8 * n) // 10
            assert len(parts.dev) == n // 10
            assert len(parts.test) == n - (8 * n) // 10 - n // 10
            ids = [e.sent_id for e in parts.train + parts.dev + parts.test]
            assert len(ids) == len(set(ids)) == n  # disjoint and exhaustive
            assert sorted(ids) == [f"s{i:05d}" for i in range(n)]


@pytest.mark.skipif(not BRIDGE_CLI.exists(), reason="scorer bridge not built (frontend/dist)")
def test_bridge_parity_and_conformance(parity_cases, tmp_path):
    with criterion("bridge-parity"):
        lexicon_path = tmp_path / "lexicon.json"
        lexicon = {w: Polarity.POSITIVE for w in parity_cases["lexicon"]["positive"]}
        lexicon |= {w: Polarity.NEGATIVE for w in parity_cases["lexicon"]["negative"]}
        save_lexicon(lexicon_path, lexicon)
        endpoint = f"node {BRIDGE_CLI} --mode lexicon --lexicon {lexicon_path}"

        texts = [case["text"] for case in parity_cases["cases"]]
        assert len(texts) == 200
        for batch_size in (1, 7, 64, 200):
            scores = remote_score_batch(endpoint, texts, batch_size=batch_size)
            assert len(scores) == len(texts)
            for text, score in zip(texts, scores):
                assert abs(score - lexicon_score(text, lexicon)) <= 1e-9
        assert remote_score_batch(endpoint, []) == []

        # malformed request line must yield an error response, not a crash
        proc = subprocess.run(
            ["node", str(BRIDGE_CLI), "--mode", "lexicon", "--lexicon", str(lexicon_path)],
            input='this is not json\n{"id": 3, "texts": ["calm"]}\n',
            stdout=subprocess.PIPE,
            text=True,
            timeout=30,
        )
        lines = [json.loads(line) for line in proc.stdout.splitlines() if line.strip()]
        assert lines[0]["id"] == 0 and "error" in lines[0]
        assert lines[1] == {"id": 3, "scores": [lexicon_score("calm", lexicon)]}
