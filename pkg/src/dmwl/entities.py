"""Pattern-based entity tagging used to group marker candidates.

Recognizes DATE (month names, day/month/year digit shapes) and ORDINAL
(1st/2nd/first/second...) out of the box; ORG spans come from a gazetteer
of company names, matched case-insensitively token by token.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from .errors import GazetteerMissingError
from .markers import PLACEHOLDER_TOKENS

_MONTHS = frozenset(
    "january february march april may june july august september october november december "
    "jan feb mar apr jun jul aug sep sept oct nov dec".split()
)
_ORDINAL_WORDS = frozenset(
    "first second third fourth fifth sixth seventh eighth ninth tenth "
    "eleventh twelfth thirteenth fourteenth fifteenth sixteenth seventeenth "
    "eighteenth nineteenth twentieth".split()
)
_ORDINAL_DIGITS = re.compile(r"^\d{1,2}(st|nd|rd|th)$")
_YEAR = re.compile(r"^\d{4}$")
_DAY = re.compile(r"^\d{1,2}$")
_SLASH_DATE = re.compile(r"^\d{1,4}[/-]\d{1,2}([/-]\d{1,4})?$")


@dataclass(frozen=True)
class EntitySpan:
    """Half-open token span [start, end) carrying an entity label."""

    start: int
    end: int
    label: str


def _is_year(token: str) -> bool:
    return bool(_YEAR.match(token)) and 1500 <= int(token) <= 2999


def _is_day(token: str) -> bool:
    if _ORDINAL_DIGITS.match(token):
        return 1 <= int(token[:-2]) <= 31
    return bool(_DAY.match(token)) and 1 <= int(token) <= 31


def load_gazetteer(path) -> list[tuple[str, ...]]:
    """One company name per line, '#' comments; names become token tuples."""
    try:
        with open(path, encoding="utf-8") as f:
            lines = f.readlines()
    except FileNotFoundError as e:
        raise GazetteerMissingError(f"gazetteer file not found: {path}") from e
    names = []
    for line in lines:
        line = line.split("#", 1)[0].strip()
        if line:
            names.append(tuple(line.lower().split()))
    return names


class EntityTagger:
    """Left-to-right greedy tagger producing non-overlapping spans.

    Gazetteer ORG matches take priority over DATE, which takes priority
    over ORDINAL. Tokens equal to a placeholder label are never tagged, so
    normalization is idempotent.
    """

    def __init__(self, org_gazetteer=None):
        self._org: dict[int, set[tuple[str, ...]]] = {}
        self._org_max = 0
        for name in org_gazetteer or []:
            name = tuple(name) if not isinstance(name, tuple) else name
            if name:
                self._org.setdefault(len(name), set()).add(name)
                self._org_max = max(self._org_max, len(name))

    def tag(self, tokens) -> list[EntitySpan]:
        lowered = [t.lower() for t in tokens]
        spans: list[EntitySpan] = []
        i = 0
        n = len(tokens)
        while i < n:
            if tokens[i] in PLACEHOLDER_TOKENS:
                i += 1
                continue
            org_end = self._match_org(lowered, i)
            if org_end is not None:
                spans.append(EntitySpan(i, org_end, "ORG"))
                i = org_end
                continue
            date_end = self._match_date(lowered, i)
            if date_end is not None:
                spans.append(EntitySpan(i, date_end, "DATE"))
                i = date_end
                continue
            if _ORDINAL_DIGITS.match(lowered[i]) or lowered[i] in _ORDINAL_WORDS:
                spans.append(EntitySpan(i, i + 1, "ORDINAL"))
            i += 1
        return spans

    def _match_org(self, lowered, i) -> int | None:
        for length in range(min(self._org_max, len(lowered) - i), 0, -1):
            if tuple(lowered[i : i + length]) in self._org.get(length, ()):
                return i + length
        return None

    def _match_date(self, lowered, i) -> int | None:
        tok = lowered[i]
        if tok in _MONTHS:
            end = i + 1
            if end < len(lowered) and _is_day(lowered[end]):
                end += 1
            if end < len(lowered) and _is_year(lowered[end]):
                end += 1
            return end
        if _SLASH_DATE.match(tok):
            return i + 1
        if _is_year(tok):
            return i + 1
        return None


def normalize_pattern(tokens, tagger: EntityTagger) -> list[str]:
    """Replace tagged spans with their placeholder label token."""
    spans = {s.start: s for s in tagger.tag(tokens)}
    out: list[str] = []
    i = 0
    while i < len(tokens):
        span = spans.get(i)
        if span is not None:
            out.append(span.label)
            i = span.end
        else:
            out.append(tokens[i])
            i += 1
    return out
