"""Synthetic corpus generator with planted, sentiment-enriched markers.

Every generated sentence is "<Opener>, <body>." where the body is drawn
from word pools chosen so the lexicon scorer lands where the plant spec
says it should. Planted openers get exactly `count` sentences each with
deterministically balanced source labels; background sentences draw from a
pool of neutral openers with mixed bodies.
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass

from .corpus import Document
from .errors import InvalidSpecError, SchemaError
from .markers import PLACEHOLDER_TOKENS, Polarity

DEFAULT_JOURNALS = ("journal-a", "journal-b", "journal-c", "journal-d", "journal-e")

# Stopword-heavy filler keeps every sentence safely past the English gate.
_FILLER = (
    "the and to of in that it as for on with at by from this was were "
    "had been are over under out down again"
).split()

DEFAULT_SYNTH_LEXICON = {
    **{w: Polarity.POSITIVE for w in (
        "wonderful excellent superb delightful thriving admirable stellar "
        "gleaming resilient flourishing uplifting generous"
    ).split()},
    **{w: Polarity.NEGATIVE for w in (
        "dreadful dismal bleak woeful crumbling grim failing miserable "
        "shoddy collapsing toxic ruinous"
    ).split()},
}

_NEUTRAL_OPENERS = tuple(
    [
        "meanwhile", "in other news", "for example", "for instance", "in addition",
        "on balance", "at this point", "in any case", "by most measures", "in general",
        "broadly speaking", "as it happens", "in the meantime", "at the same time",
        "according to reports", "in recent weeks", "over the weekend", "across the region",
        "in the capital", "on the ground", "at the meeting", "after the vote",
        "during the session", "before the break", "under the plan", "within the group",
        "along the coast", "near the border", "inside the hall", "outside the office",
        "beyond the city", "around the country", "on the agenda", "in the report",
        "per the filing", "from the archives", "at the margins", "on the record",
        "off the record", "in the background", "behind the scenes", "above the fold",
        "below the line", "between the lines", "against this backdrop", "with that said",
        "all told", "on the whole", "in short", "in summary", "put differently",
        "stated plainly", "by the numbers", "in figures", "as expected", "as planned",
        "as scheduled", "by all measures", "on current trends", "at last count",
        "per early estimates", "in the first quarter", "during the quarter",
    ]
)


@dataclass(frozen=True)
class PlantSpec:
    """One marker to plant with a controlled sentiment-purity level."""

    dm_pattern: str
    polarity: Polarity
    purity: float
    count: int
    sources: dict[str, float] | None = None

    def __post_init__(self):
        if not (0.0 <= self.purity <= 1.0):
            raise InvalidSpecError(f"purity outside [0, 1]: {self.purity}")
        if self.count < 1:
            raise InvalidSpecError(f"count must be >= 1, got {self.count}")
        tokens = self.dm_pattern.split()
        if not tokens or len(tokens) > 3 or "," in self.dm_pattern:
            raise InvalidSpecError(f"bad planted pattern: {self.dm_pattern!r}")
        if any(t in PLACEHOLDER_TOKENS for t in tokens):
            raise InvalidSpecError("planted patterns must be literal (no placeholders)")


def _source_schedule(sources: dict[str, float], count: int) -> list[str]:
    """Deterministic largest-remainder allocation of count slots to sources."""
    names = sorted(sources)
    total = sum(sources[n] for n in names)
    if total <= 0:
        raise InvalidSpecError("source weights must sum to a positive value")
    exact = {n: count * sources[n] / total for n in names}
    alloc = {n: int(exact[n]) for n in names}
    leftover = count - sum(alloc.values())
    for n in sorted(names, key=lambda n: (-(exact[n] - alloc[n]), n))[:leftover]:
        alloc[n] += 1
    schedule: list[str] = []
    remaining = dict(alloc)
    while len(schedule) < count:
        for n in names:
            if remaining[n] > 0:
                schedule.append(n)
                remaining[n] -= 1
    return schedule[:count]


def _body(rng: random.Random, pool: list[str] | None) -> str:
    """4-20 word body: mostly filler, plus sentiment words when pool is given."""
    n_filler = rng.randint(5, 12)
    words = [rng.choice(_FILLER) for _ in range(n_filler)]
    if pool:
        for _ in range(rng.randint(2, 3)):
            words.insert(rng.randrange(len(words) + 1), rng.choice(pool))
    return " ".join(words)


def _capitalize(pattern: str) -> str:
    return pattern[0].upper() + pattern[1:] if pattern else pattern


def generate(
    specs,
    background_count: int,
    lexicon=None,
    seed: int = 0,
    journals=DEFAULT_JOURNALS,
) -> list[Document]:
    """Generate one single-sentence document per planted or background sentence.

    Planted sentences draw a matching-polarity body with probability
    `purity` and the opposite pool otherwise; background sentences use a
    neutral opener (never a planted pattern) with a neutral or mildly
    sentiment-bearing body. Fully deterministic for a given seed.
    """
    specs = list(specs)
    lexicon = dict(lexicon) if lexicon else dict(DEFAULT_SYNTH_LEXICON)
    pos_pool = sorted(w for w, p in lexicon.items() if p == Polarity.POSITIVE)
    neg_pool = sorted(w for w, p in lexicon.items() if p == Polarity.NEGATIVE)
    if not pos_pool or not neg_pool:
        raise InvalidSpecError("lexicon needs words of both polarities")

    planted_patterns = {s.dm_pattern.lower() for s in specs}
    openers = [o for o in _NEUTRAL_OPENERS if o not in planted_patterns]

    rng = random.Random(seed)
    docs: list[Document] = []

    def emit(opener: str, body: str, source: str):
        doc_id = f"synth-{len(docs):06d}"
        text = f"{_capitalize(opener)}, {body}."
        docs.append(Document(doc_id=doc_id, text=text, source=source, topic=None, date=None))

    for spec in specs:
        own_pool = pos_pool if spec.polarity == Polarity.POSITIVE else neg_pool
        other_pool = neg_pool if spec.polarity == Polarity.POSITIVE else pos_pool
        weights = spec.sources or {j: 1.0 for j in journals}
        schedule = _source_schedule(weights, spec.count)
        for i in range(spec.count):
            pool = own_pool if rng.random() < spec.purity else other_pool
            emit(spec.dm_pattern, _body(rng, pool), schedule[i])

    for _ in range(background_count):
        roll = rng.random()
        if roll < 0.5:
            pool = None
        elif roll < 0.75:
            pool = pos_pool
        else:
            pool = neg_pool
        emit(rng.choice(openers), _body(rng, pool), rng.choice(list(journals)))

    return docs


def load_plan(path) -> tuple[list[PlantSpec], int, dict[str, Polarity] | None]:
    """Read a generation plan file.

    JSON object with "specs" (list of plant specs), "background_count",
    and an optional "lexicon" ({"positive": [...], "negative": [...]}).
    """
    with open(path, encoding="utf-8") as f:
        try:
            payload = json.load(f)
        except json.JSONDecodeError as e:
            raise SchemaError(f"plan file is not valid JSON: {e}") from e
    if not isinstance(payload, dict) or "specs" not in payload or "background_count" not in payload:
        raise SchemaError("plan file must have 'specs' and 'background_count'")
    specs = []
    for i, item in enumerate(payload["specs"]):
        try:
            specs.append(
                PlantSpec(
                    dm_pattern=item["dm_pattern"],
                    polarity=Polarity(item["polarity"]),
                    purity=float(item["purity"]),
                    count=int(item["count"]),
                    sources=item.get("sources"),
                )
            )
        except (KeyError, ValueError, TypeError) as e:
            raise SchemaError(f"plant spec {i} is invalid: {e}") from e
    lexicon = None
    if payload.get("lexicon") is not None:
        lex = payload["lexicon"]
        if not isinstance(lex, dict):
            raise SchemaError("plan lexicon must be an object")
        lexicon = {}
        for key, polarity in (("positive", Polarity.POSITIVE), ("negative", Polarity.NEGATIVE)):
            for word in lex.get(key, []):
                lexicon[str(word).lower()] = polarity
    return specs, int(payload["background_count"]), lexicon
