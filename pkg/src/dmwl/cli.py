"""Command-line pipeline: ingest, extract, discover, build, split, synth, stats.

Exit codes: 0 success, 1 usage error, 2 data error, 3 scorer error.
Option precedence for tunable settings: flag > DMWL_* environment
variable > config file > built-in default.
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys

from .corpus import FilterConfig, read_documents, write_documents
from .datasets import (
    Dataset,
    Strategy,
    build_dataset,
    duplicate_text_rate,
    read_dataset,
    split_dataset,
    write_dataset,
)
from .discovery import DiscoveryConfig, discover_domain_dms, read_report, write_report
from .entities import EntityTagger, load_gazetteer
from .errors import DataError, ScorerFailure, SchemaError
from .index import build_index, load_index, save_index
from .labeling import extract_weak_labels, write_examples
from .markers import general_dm_list, load_dm_list, save_dm_list
from .scoring import HighConfidenceThresholds, resolve_scorer
from .stats import mcnemar_exact
from .synth import generate, load_plan

logger = logging.getLogger("dmwl")

ENV_PREFIX = "DMWL_"

# Default values for every resolvable option; config-file keys use the
# flag spelling (dashes).
DEFAULTS = {
    "seed": 0,
    "jobs": 1,
    "scorer": None,
    "batch-size": 64,
    "timeout": 30.0,
    "min-tokens": 3,
    "max-tokens": 32,
    "lang-threshold": 0.75,
    "require-balanced": True,
    "top-k": 1000,
    "sample-size": 1000,
    "min-assigned": 30,
    "majority-min": 0.85,
    "alpha": 0.01,
    "entropy-drop": 0.30,
    "repetitiveness-min": 0.5,
    "pos-min": 0.9,
    "neg-max": 0.1,
    "domain": "domain",
}

_CASTS = {
    "seed": int,
    "jobs": int,
    "batch-size": int,
    "min-tokens": int,
    "max-tokens": int,
    "top-k": int,
    "sample-size": int,
    "min-assigned": int,
    "timeout": float,
    "lang-threshold": float,
    "majority-min": float,
    "alpha": float,
    "entropy-drop": float,
    "repetitiveness-min": float,
    "pos-min": float,
    "neg-max": float,
    "require-balanced": lambda v: str(v).strip().lower() in ("1", "true", "yes", "on"),
}


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{message}\n{self.format_usage()}")


def load_config_file(path) -> dict[str, str]:
    """Flat key = value lines, '#' comments, keys spelled like flags."""
    values: dict[str, str] = {}
    with open(path, encoding="utf-8") as f:
        for lineno, line in enumerate(f, start=1):
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise DataError(f"config line {lineno} is not 'key = value': {line!r}")
            key, _, value = line.partition("=")
            values[key.strip()] = value.strip()
    return values


class Options:
    """Resolves option values through the flag/env/config/default chain."""

    def __init__(self, args: argparse.Namespace):
        self.args = args
        self.config = load_config_file(args.config) if getattr(args, "config", None) else {}

    def get(self, key: str):
        flag_value = getattr(self.args, key.replace("-", "_"), None)
        if flag_value is not None:
            return flag_value
        env_value = os.environ.get(ENV_PREFIX + key.replace("-", "_").upper())
        cast = _CASTS.get(key, str)
        if env_value is not None:
            return cast(env_value)
        if key in self.config:
            return cast(self.config[key])
        return DEFAULTS[key]

    def effective(self, keys) -> dict:
        return {k: self.get(k) for k in keys}


def _filter_config(opts: Options) -> FilterConfig:
    return FilterConfig(
        min_tokens=opts.get("min-tokens"),
        max_tokens=opts.get("max-tokens"),
        lang_threshold=opts.get("lang-threshold"),
        require_balanced=opts.get("require-balanced"),
    )


def _thresholds(opts: Options) -> HighConfidenceThresholds:
    return HighConfidenceThresholds(pos_min=opts.get("pos-min"), neg_max=opts.get("neg-max"))


def _scorer(opts: Options, required_by: str | None = None):
    spec = opts.get("scorer")
    scorer = resolve_scorer(spec, batch_size=opts.get("batch-size"), timeout=opts.get("timeout"))
    if scorer is None and required_by:
        raise UsageError(f"{required_by} needs --scorer (or {ENV_PREFIX}SCORER)")
    return scorer


def _load_dms(path: str):
    if path == "general":
        return general_dm_list()
    return load_dm_list(path)


def _close_scorer(scorer) -> None:
    close = getattr(scorer, "close", None)
    if close:
        close()


def _announce(opts: Options, command: str, keys, paths: dict) -> dict:
    config = {"command": command, **paths, **opts.effective(keys)}
    logger.info("effective config: %s", json.dumps(config, sort_keys=True))
    return config


def _dry_run(args, config) -> bool:
    if getattr(args, "dry_run", False):
        print(json.dumps(config, indent=2, sort_keys=True))
        return True
    return False


# ---------------------------------------------------------------- commands


def cmd_ingest(args) -> int:
    opts = Options(args)
    keys = ("seed", "jobs", "min-tokens", "max-tokens", "lang-threshold", "require-balanced")
    config = _announce(opts, "ingest", keys, {"corpus": args.corpus, "out": args.out})
    if _dry_run(args, config):
        return 0
    docs = read_documents(args.corpus)
    index = build_index(docs, _filter_config(opts), jobs=opts.get("jobs"))
    save_index(args.out, index)
    logger.info("indexed %d sentences from %d documents", len(index), len(docs))
    return 0


def cmd_extract(args) -> int:
    opts = Options(args)
    config = _announce(opts, "extract", ("seed",), {"index": args.index, "dms": args.dms, "out": args.out})
    if _dry_run(args, config):
        return 0
    index = load_index(args.index)
    dms = _load_dms(args.dms)
    gazetteer = load_gazetteer(args.org_gazetteer) if args.org_gazetteer else None
    examples = extract_weak_labels(index, dms, EntityTagger(gazetteer))
    write_examples(args.out, examples)
    logger.info("extracted %d weak labels with list %r", len(examples), dms.name)
    return 0


def cmd_discover(args) -> int:
    opts = Options(args)
    keys = (
        "seed", "scorer", "domain", "top-k", "sample-size", "min-assigned", "majority-min",
        "alpha", "entropy-drop", "repetitiveness-min", "pos-min", "neg-max",
    )
    paths = {
        "index": args.index,
        "out_dms": args.out_dms,
        "report": args.report,
        "gazetteer": args.gazetteer,
    }
    config = _announce(opts, "discover", keys, paths)
    if _dry_run(args, config):
        return 0
    index = load_index(args.index)
    scorer = _scorer(opts, required_by="discover")
    cfg = DiscoveryConfig(
        top_k=opts.get("top-k"),
        sample_size=opts.get("sample-size"),
        min_assigned=opts.get("min-assigned"),
        majority_min=opts.get("majority-min"),
        alpha=opts.get("alpha"),
        entropy_drop_fraction=opts.get("entropy-drop"),
        repetitiveness_min_unique=opts.get("repetitiveness-min"),
        thresholds=_thresholds(opts),
        rng_seed=opts.get("seed"),
    )
    gazetteer = load_gazetteer(args.gazetteer) if args.gazetteer else None
    org_gazetteer = load_gazetteer(args.org_gazetteer) if args.org_gazetteer else None
    try:
        dm_list, report = discover_domain_dms(
            index,
            scorer,
            ner=EntityTagger(org_gazetteer),
            cfg=cfg,
            gazetteer=gazetteer,
            domain=opts.get("domain"),
        )
    finally:
        _close_scorer(scorer)
    save_dm_list(args.out_dms, dm_list)
    if args.report:
        write_report(args.report, report)
    logger.info("discovered %d markers out of %d candidates", len(dm_list.entries), len(report))
    return 0


def cmd_build(args) -> int:
    opts = Options(args)
    keys = ("seed", "scorer", "pos-min", "neg-max")
    paths = {
        "strategy": args.strategy,
        "index": args.index,
        "general_dms": args.general_dms,
        "domain_dms": args.domain_dms,
        "out": args.out,
    }
    config = _announce(opts, "build", keys, paths)
    if _dry_run(args, config):
        return 0
    strategy = Strategy(args.strategy)
    index = load_index(args.index)
    needs_scorer = strategy in (
        Strategy.SELF_TRAIN,
        Strategy.GENERAL_DM_PLUS_SELF,
        Strategy.DOMAIN_DM_PLUS_SELF,
    )
    scorer = _scorer(opts, required_by=f"build --strategy {strategy.value}" if needs_scorer else None)
    general = _load_dms(args.general_dms) if args.general_dms else None
    domain = _load_dms(args.domain_dms) if args.domain_dms else None
    if strategy in (Strategy.DOMAIN_DM, Strategy.DOMAIN_DM_PLUS_SELF) and domain is None:
        raise UsageError(f"build --strategy {strategy.value} needs --domain-dms")
    try:
        dataset = build_dataset(
            strategy,
            index,
            general_dms=general,
            domain_dms=domain,
            scorer=scorer,
            thresholds=_thresholds(opts),
            corpus_name=args.corpus_name or os.path.basename(args.index),
            seed=opts.get("seed"),
        )
    finally:
        _close_scorer(scorer)
    write_dataset(args.out, dataset)
    counts = dataset.label_counts()
    logger.info(
        "built %s dataset: %d examples (%d positive / %d negative)",
        strategy.value, len(dataset.examples), counts["positive"], counts["negative"],
    )
    return 0


def cmd_split(args) -> int:
    opts = Options(args)
    paths = {"dataset": args.dataset, "out_prefix": args.out_prefix}
    config = _announce(opts, "split", ("seed",), paths)
    if _dry_run(args, config):
        return 0
    dataset = read_dataset(args.dataset)
    parts = split_dataset(dataset, seed=opts.get("seed"))
    for name, examples in (("train", parts.train), ("dev", parts.dev), ("test", parts.test)):
        part = Dataset(examples=examples, strategy=dataset.strategy, provenance=dataset.provenance)
        write_dataset(f"{args.out_prefix}.{name}.jsonl", part)
    logger.info(
        "split %d examples into %d/%d/%d",
        len(dataset.examples), len(parts.train), len(parts.dev), len(parts.test),
    )
    return 0


def cmd_synth(args) -> int:
    opts = Options(args)
    config = _announce(opts, "synth", ("seed",), {"plan": args.plan, "out": args.out})
    if _dry_run(args, config):
        return 0
    specs, background_count, lexicon = load_plan(args.plan)
    docs = generate(specs, background_count, lexicon=lexicon, seed=opts.get("seed"))
    write_documents(args.out, docs)
    logger.info("generated %d documents (%d planted specs)", len(docs), len(specs))
    return 0


def cmd_stats(args) -> int:
    opts = Options(args)
    if args.stats_command == "dataset":
        config = _announce(opts, "stats dataset", (), {"dataset": args.path})
        if _dry_run(args, config):
            return 0
        dataset = read_dataset(args.path)
        counts = dataset.label_counts()
        print(
            json.dumps(
                {
                    "examples": len(dataset.examples),
                    "counts": counts,
                    "strategy": dataset.strategy.value,
                    "duplicate_text_rate": duplicate_text_rate(dataset),
                },
                sort_keys=True,
            )
        )
        return 0
    if args.stats_command == "report":
        config = _announce(opts, "stats report", (), {"report": args.path})
        if _dry_run(args, config):
            return 0
        rows = read_report(args.path)
        selected = [r for r in rows if r.get("decision") == "selected"]
        reasons: dict[str, int] = {}
        for r in rows:
            if r.get("decision") == "rejected":
                reasons[r.get("reason")] = reasons.get(r.get("reason"), 0) + 1
        print(
            json.dumps(
                {"candidates": len(rows), "selected": len(selected), "rejected_by_reason": reasons},
                sort_keys=True,
            )
        )
        return 0
    # mcnemar between two prediction files
    config = _announce(opts, "stats mcnemar", (), {"a": args.a, "b": args.b})
    if _dry_run(args, config):
        return 0
    b_count, c_count = _discordant_counts(args.a, args.b)
    print(
        json.dumps(
            {"b": b_count, "c": c_count, "p_value": mcnemar_exact(b_count, c_count)},
            sort_keys=True,
        )
    )
    return 0


def _read_predictions(path) -> dict[str, tuple[str, str]]:
    """Prediction file: one JSON object per line with id, label, gold."""
    out: dict[str, tuple[str, str]] = {}
    with open(path, encoding="utf-8") as f:
        for lineno, line in enumerate(f, start=1):
            if not line.strip():
                continue
            try:
                obj = json.loads(line)
            except json.JSONDecodeError as e:
                raise SchemaError(f"prediction line is not valid JSON: {e}", line=lineno) from e
            try:
                out[str(obj["id"])] = (str(obj["label"]), str(obj["gold"]))
            except (KeyError, TypeError) as e:
                raise SchemaError(f"prediction line missing field {e}", line=lineno) from e
    return out


def _discordant_counts(path_a, path_b) -> tuple[int, int]:
    preds_a = _read_predictions(path_a)
    preds_b = _read_predictions(path_b)
    if set(preds_a) != set(preds_b):
        raise DataError("prediction files do not cover the same ids")
    b = c = 0
    for key, (label_a, gold) in preds_a.items():
        label_b, gold_b = preds_b[key]
        if gold_b != gold:
            raise DataError(f"gold labels disagree for id {key!r}")
        a_right = label_a == gold
        b_right = label_b == gold
        if a_right and not b_right:
            b += 1
        elif b_right and not a_right:
            c += 1
    return b, c


# ---------------------------------------------------------------- wiring


def _add_common(parser: argparse.ArgumentParser):
    parser.add_argument("--seed", type=int, default=None, help="random seed (default 0)")
    parser.add_argument("--jobs", type=int, default=None, help="worker parallelism bound")
    parser.add_argument("--config", default=None, help="flat key=value config file")
    parser.add_argument("--scorer", default=None, help="lexicon:PATH | tcp://HOST:PORT | command")
    parser.add_argument("--batch-size", type=int, default=None, help="scorer batch size")
    parser.add_argument("--timeout", type=float, default=None, help="scorer timeout in seconds")
    parser.add_argument("--dry-run", action="store_true", help="print resolved config, write nothing")
    parser.add_argument("-v", "--verbose", action="store_true", help="debug logging")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="dmwl", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("ingest", help="corpus JSONL -> sentence index")
    p.add_argument("--corpus", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--min-tokens", type=int, default=None)
    p.add_argument("--max-tokens", type=int, default=None)
    p.add_argument("--lang-threshold", type=float, default=None)
    p.add_argument("--require-balanced", type=lambda v: v.lower() in ("1", "true", "yes"), default=None)
    _add_common(p)
    p.set_defaults(func=cmd_ingest)

    p = sub.add_parser("extract", help="index + marker list -> weak-label JSONL")
    p.add_argument("--index", required=True)
    p.add_argument("--dms", required=True, help="marker list JSON, or 'general' for the shipped list")
    p.add_argument("--out", required=True)
    p.add_argument("--org-gazetteer", default=None, help="company names for ORG placeholders")
    _add_common(p)
    p.set_defaults(func=cmd_extract)

    p = sub.add_parser("discover", help="index + scorer -> domain marker list + report")
    p.add_argument("--index", required=True)
    p.add_argument("--out-dms", required=True)
    p.add_argument("--report", default=None)
    p.add_argument("--domain", default=None)
    p.add_argument("--gazetteer", default=None, help="restrict analysis to company-mentioning sentences")
    p.add_argument("--org-gazetteer", default=None, help="company names for ORG placeholders")
    p.add_argument("--top-k", type=int, default=None)
    p.add_argument("--sample-size", type=int, default=None)
    p.add_argument("--min-assigned", type=int, default=None)
    p.add_argument("--majority-min", type=float, default=None)
    p.add_argument("--alpha", type=float, default=None)
    p.add_argument("--entropy-drop", type=float, default=None)
    p.add_argument("--repetitiveness-min", type=float, default=None)
    p.add_argument("--pos-min", type=float, default=None)
    p.add_argument("--neg-max", type=float, default=None)
    _add_common(p)
    p.set_defaults(func=cmd_discover)

    p = sub.add_parser("build", help="index + lists + scorer -> dataset file")
    p.add_argument("--strategy", required=True, choices=[s.value for s in Strategy])
    p.add_argument("--index", required=True)
    p.add_argument("--general-dms", default=None, help="marker list JSON or 'general'")
    p.add_argument("--domain-dms", default=None)
    p.add_argument("--out", required=True)
    p.add_argument("--corpus-name", default=None)
    p.add_argument("--pos-min", type=float, default=None)
    p.add_argument("--neg-max", type=float, default=None)
    _add_common(p)
    p.set_defaults(func=cmd_build)

    p = sub.add_parser("split", help="dataset -> train/dev/test files")
    p.add_argument("--dataset", required=True)
    p.add_argument("--out-prefix", required=True)
    _add_common(p)
    p.set_defaults(func=cmd_split)

    p = sub.add_parser("synth", help="generation plan -> synthetic corpus JSONL")
    p.add_argument("--plan", required=True)
    p.add_argument("--out", required=True)
    _add_common(p)
    p.set_defaults(func=cmd_synth)

    p = sub.add_parser("stats", help="summaries and McNemar comparison")
    stats_sub = p.add_subparsers(dest="stats_command", required=True)
    sp = stats_sub.add_parser("dataset")
    sp.add_argument("path")
    _add_common(sp)
    sp.set_defaults(func=cmd_stats)
    sp = stats_sub.add_parser("report")
    sp.add_argument("path")
    _add_common(sp)
    sp.set_defaults(func=cmd_stats)
    sp = stats_sub.add_parser("mcnemar")
    sp.add_argument("a")
    sp.add_argument("b")
    _add_common(sp)
    sp.set_defaults(func=cmd_stats)

    return parser


def run(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError as e:
        print(str(e), file=sys.stderr)
        return 1
    logging.basicConfig(
        level=logging.DEBUG if args.verbose else logging.INFO,
        format="%(levelname)s %(name)s: %(message)s",
        stream=sys.stderr,
    )
    try:
        return args.func(args)
    except UsageError as e:
        print(str(e), file=sys.stderr)
        return 1
    except ScorerFailure as e:
        print(f"scorer error: {e}", file=sys.stderr)
        return 3
    except DataError as e:
        print(f"data error: {e}", file=sys.stderr)
        return 2
    except OSError as e:
        print(f"io error: {e}", file=sys.stderr)
        return 2


def main(argv=None) -> None:
    sys.exit(run(argv))


if __name__ == "__main__":
    main()
