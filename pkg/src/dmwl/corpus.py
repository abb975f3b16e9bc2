"""Document ingestion: sentence splitting, tokenization, and sentence filters.

Raw documents come in as newline-delimited JSON; sentences that survive the
length, bracket-balance, and English-likelihood gates become the unit every
later stage works on.
"""

from __future__ import annotations

import json
import string
from dataclasses import dataclass
from enum import Enum

from .errors import InvalidParamsError, SchemaError

# 50 high-frequency English function words; the English gate counts hits on these.
STOPWORDS = frozenset(
    """
    the a an and or but if then so as of at by for with about to from in on
    up down out over under again is are was were be been it its this that
    these those they we you he she not no do did has have had
    """.split()
)

# Abbreviations whose trailing period must not end a sentence.
ABBREVIATIONS = frozenset(
    [
        "Mr.", "Mrs.", "Ms.", "Dr.", "Prof.", "Rev.", "Gen.", "Sen.", "Rep.",
        "St.", "Sr.", "Jr.", "vs.", "etc.", "e.g.", "i.e.", "Inc.", "Ltd.",
        "Corp.", "Co.", "No.", "Dept.", "Univ.", "Jan.", "Feb.", "Mar.",
        "Apr.", "Jun.", "Jul.", "Aug.", "Sep.", "Sept.", "Oct.", "Nov.",
        "Dec.", "U.S.", "U.K.", "U.N.",
    ]
)

_PUNCT = frozenset(string.punctuation)
_BRACKETS = {")": "(", "]": "[", "}": "{"}
_TERMINALS = frozenset(".!?")


@dataclass(frozen=True)
class Document:
    """One raw input document with its provenance metadata."""

    doc_id: str
    text: str
    source: str
    topic: str | None = None
    date: str | None = None


@dataclass(frozen=True)
class Sentence:
    """An accepted corpus sentence with provenance."""

    sent_id: str
    text: str
    tokens: tuple[str, ...]
    doc_id: str
    source: str
    topic: str | None = None


class RejectReason(str, Enum):
    TOO_SHORT = "TooShort"
    TOO_LONG = "TooLong"
    UNBALANCED = "Unbalanced"
    NON_ENGLISH = "NonEnglish"


@dataclass(frozen=True)
class FilterConfig:
    """Gates a raw sentence must pass to enter the index."""

    min_tokens: int = 3
    max_tokens: int = 32
    lang_threshold: float = 0.75
    require_balanced: bool = True

    def __post_init__(self):
        if not (0 < self.min_tokens <= self.max_tokens):
            raise InvalidParamsError(
                f"need 0 < min_tokens <= max_tokens, got {self.min_tokens}/{self.max_tokens}"
            )
        if not (0.0 <= self.lang_threshold <= 1.0):
            raise InvalidParamsError(f"lang_threshold outside [0, 1]: {self.lang_threshold}")


@dataclass(frozen=True)
class FilterResult:
    accepted: bool
    reason: RejectReason | None = None
    tokens: tuple[str, ...] | None = None


def tokenize(text: str) -> list[str]:
    """Split on whitespace, detaching leading/trailing punctuation as tokens.

    Apostrophes and hyphens inside a chunk stay put ("isn't",
    "state-of-the-art"), so do other interior marks ("1,000", "U.S").
    """
    tokens: list[str] = []
    for chunk in text.split():
        lead: list[str] = []
        tail: list[str] = []
        while chunk and chunk[0] in _PUNCT:
            lead.append(chunk[0])
            chunk = chunk[1:]
        while chunk and chunk[-1] in _PUNCT:
            tail.append(chunk[-1])
            chunk = chunk[:-1]
        tokens.extend(lead)
        if chunk:
            tokens.append(chunk)
        tokens.extend(reversed(tail))
    return tokens


def split_sentences(text: str) -> list[str]:
    """Split text into sentences on terminal punctuation.

    A boundary is a '.', '!' or '?' followed by whitespace and an uppercase
    letter, or by end of text. Periods ending a known abbreviation or a
    single capital initial do not break. Text without any boundary comes
    back whole.
    """
    sentences: list[str] = []
    start = 0
    i = 0
    n = len(text)
    while i < n:
        ch = text[i]
        if ch in _TERMINALS:
            j = i + 1
            while j < n and text[j].isspace():
                j += 1
            at_end = j >= n
            upper_next = not at_end and text[j].isupper() and j > i + 1
            if (at_end or upper_next) and not (ch == "." and _is_abbreviation(text, i)):
                piece = text[start : i + 1].strip()
                if piece:
                    sentences.append(piece)
                start = j
                i = j
                continue
        i += 1
    remainder = text[start:].strip()
    if remainder:
        sentences.append(remainder)
    return sentences


def _is_abbreviation(text: str, dot_index: int) -> bool:
    k = dot_index
    while k > 0 and not text[k - 1].isspace():
        k -= 1
    word = text[k : dot_index + 1].lstrip("([\"'")
    if word in ABBREVIATIONS:
        return True
    # Single capital initial, as in "John F. Kennedy".
    return len(word) == 2 and word[0].isalpha() and word[0].isupper()


def language_score(text: str) -> float:
    """Heuristic probability that text is English, in [0, 1].

    Combines the ASCII share of the letters with a saturating stopword-hit
    rate (full marks once stopwords make up an eighth of the tokens);
    pluggable identifiers can replace this behind the same contract.
    Empty or blank text scores 0.0.
    """
    if not text.strip():
        return 0.0
    letters = [ch for ch in text if ch.isalpha()]
    if letters:
        ascii_frac = sum(1 for ch in letters if ch.isascii()) / len(letters)
    else:
        ascii_frac = 0.0
    tokens = tokenize(text)
    if tokens:
        hits = sum(1 for t in tokens if t.lower() in STOPWORDS)
        stop_comp = min(1.0, 4.0 * hits / len(tokens))
    else:
        stop_comp = 0.0
    return min(1.0, max(0.0, 0.5 * ascii_frac + 0.5 * stop_comp))


def brackets_balanced(text: str) -> bool:
    stack: list[str] = []
    for ch in text:
        if ch in "([{":
            stack.append(ch)
        elif ch in _BRACKETS:
            if not stack or stack.pop() != _BRACKETS[ch]:
                return False
    return not stack


def word_token_count(tokens: list[str] | tuple[str, ...]) -> int:
    """Tokens that contain at least one non-punctuation character."""
    return sum(1 for t in tokens if any(ch not in _PUNCT for ch in t))


def filter_sentence(text: str, cfg: FilterConfig | None = None, language_scorer=None) -> FilterResult:
    """Accept or reject one raw sentence, with a reason code on rejection.

    The length bound counts word tokens only; detached punctuation does not
    count toward the 3-32 window. An external language identifier can be
    plugged in as `language_scorer` (text -> probability of English);
    the built-in heuristic is the default.
    """
    cfg = cfg or FilterConfig()
    language_scorer = language_scorer or language_score
    tokens = tuple(tokenize(text))
    n_words = word_token_count(tokens)
    if n_words < cfg.min_tokens:
        return FilterResult(False, RejectReason.TOO_SHORT)
    if n_words > cfg.max_tokens:
        return FilterResult(False, RejectReason.TOO_LONG)
    if cfg.require_balanced and not brackets_balanced(text):
        return FilterResult(False, RejectReason.UNBALANCED)
    if language_scorer(text) < cfg.lang_threshold:
        return FilterResult(False, RejectReason.NON_ENGLISH)
    return FilterResult(True, None, tokens)


def read_documents(path) -> list[Document]:
    """Read a newline-delimited JSON corpus; unknown keys are ignored."""
    docs: list[Document] = []
    with open(path, encoding="utf-8") as f:
        for lineno, line in enumerate(f, start=1):
            if not line.strip():
                continue
            try:
                obj = json.loads(line)
            except json.JSONDecodeError as e:
                raise SchemaError(f"corpus line is not valid JSON: {e}", line=lineno) from e
            if not isinstance(obj, dict):
                raise SchemaError("corpus line is not a JSON object", line=lineno)
            try:
                doc = Document(
                    doc_id=obj["doc_id"],
                    text=obj["text"],
                    source=obj["source"],
                    topic=obj.get("topic"),
                    date=obj.get("date"),
                )
            except KeyError as e:
                raise SchemaError(f"corpus line missing field {e}", line=lineno) from e
            if not doc.doc_id or not isinstance(doc.doc_id, str):
                raise SchemaError("doc_id must be a non-empty string", line=lineno)
            if not doc.text or not isinstance(doc.text, str):
                raise SchemaError("text must be a non-empty string", line=lineno)
            docs.append(doc)
    return docs


def write_documents(path, docs) -> None:
    with open(path, "w", encoding="utf-8") as f:
        for doc in docs:
            f.write(
                json.dumps(
                    {
                        "doc_id": doc.doc_id,
                        "text": doc.text,
                        "source": doc.source,
                        "topic": doc.topic,
                        "date": doc.date,
                    },
                    ensure_ascii=False,
                    sort_keys=True,
                    separators=(",", ":"),
                )
                + "\n"
            )
