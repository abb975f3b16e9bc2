"""Discourse-marker lists: entries, validation, file IO, and the shipped general list."""

from __future__ import annotations

import json
import logging
from dataclasses import dataclass
from enum import Enum

from .errors import DataError, SchemaError

logger = logging.getLogger(__name__)

# Entity placeholder tokens allowed inside marker surfaces.
PLACEHOLDER_TOKENS = frozenset({"DATE", "ORG", "ORDINAL"})

MAX_SURFACE_TOKENS = 3


class Polarity(str, Enum):
    POSITIVE = "positive"
    NEGATIVE = "negative"


@dataclass(frozen=True)
class DMEntry:
    """A marker pattern of up to three tokens with its sentiment polarity."""

    surface: str
    polarity: Polarity

    @property
    def has_placeholders(self) -> bool:
        return any(t in PLACEHOLDER_TOKENS for t in self.surface.split())


def normalize_surface(surface: str) -> str:
    """Validate and canonicalize a marker surface.

    Tokens are lowercased except entity placeholders; the result is a
    single-space join of one to three comma-free tokens.
    """
    tokens = surface.split()
    if not tokens:
        raise DataError("marker surface is empty")
    if len(tokens) > MAX_SURFACE_TOKENS:
        raise DataError(f"marker surface longer than {MAX_SURFACE_TOKENS} tokens: {surface!r}")
    if "," in surface:
        raise DataError(f"marker surface contains a comma: {surface!r}")
    return " ".join(t if t in PLACEHOLDER_TOKENS else t.lower() for t in tokens)


def make_entry(surface: str, polarity: Polarity | str) -> DMEntry:
    return DMEntry(normalize_surface(surface), Polarity(polarity))


@dataclass
class DMList:
    """A named collection of marker entries with unique surfaces."""

    name: str
    entries: list[DMEntry]

    def __post_init__(self):
        surfaces = [e.surface for e in self.entries]
        if len(surfaces) != len(set(surfaces)):
            dupes = sorted({s for s in surfaces if surfaces.count(s) > 1})
            raise DataError(f"duplicate marker surfaces in list {self.name!r}: {dupes}")
        polarities = {e.polarity for e in self.entries}
        if self.entries and len(polarities) < 2:
            logger.warning(
                "marker list %r has entries of only one polarity (%s)",
                self.name,
                next(iter(polarities)).value,
            )

    def by_polarity(self, polarity: Polarity) -> list[DMEntry]:
        return [e for e in self.entries if e.polarity == polarity]


_GENERAL_POSITIVE = ("luckily", "hopefully", "fortunately", "ideally", "happily", "thankfully")
_GENERAL_NEGATIVE = ("sadly", "inevitably", "unfortunately", "admittedly", "curiously")


def general_dm_list() -> DMList:
    """The shipped general-English marker list (6 positive, 5 negative)."""
    entries = [make_entry(s, Polarity.POSITIVE) for s in _GENERAL_POSITIVE]
    entries += [make_entry(s, Polarity.NEGATIVE) for s in _GENERAL_NEGATIVE]
    return DMList(name="L_g", entries=entries)


def load_dm_list(path) -> DMList:
    """Read a marker list from JSON: {"name": ..., "entries": [{"surface", "polarity"}]}."""
    with open(path, encoding="utf-8") as f:
        try:
            payload = json.load(f)
        except json.JSONDecodeError as e:
            raise SchemaError(f"marker list is not valid JSON: {e}") from e
    if not isinstance(payload, dict) or "name" not in payload or "entries" not in payload:
        raise SchemaError("marker list must be an object with 'name' and 'entries'")
    entries = []
    for i, item in enumerate(payload["entries"]):
        if not isinstance(item, dict) or set(item) != {"surface", "polarity"}:
            raise SchemaError(f"entry {i} must have exactly 'surface' and 'polarity'")
        try:
            entries.append(make_entry(item["surface"], item["polarity"]))
        except (DataError, ValueError) as e:
            raise SchemaError(f"entry {i} is invalid: {e}") from e
    return DMList(name=payload["name"], entries=entries)


def save_dm_list(path, dms: DMList) -> None:
    payload = {
        "name": dms.name,
        "entries": [{"surface": e.surface, "polarity": e.polarity.value} for e in dms.entries],
    }
    with open(path, "w", encoding="utf-8") as f:
        f.write(json.dumps(payload, ensure_ascii=False, sort_keys=True, separators=(",", ":")))
        f.write("\n")
