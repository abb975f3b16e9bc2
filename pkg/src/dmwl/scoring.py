"""Sentence-confidence scorers and the high-confidence assignment rule.

A scorer maps each text to the probability of positive sentiment. The
built-in lexicon scorer is deterministic and dependency-free; RemoteScorer
speaks the line protocol (one JSON request/response per line) to an
external process over stdio or TCP.
"""

from __future__ import annotations

import json
import logging
import os
import queue
import shlex
import socket
import subprocess
import threading
import time
from dataclasses import dataclass
from enum import Enum

from .corpus import tokenize
from .errors import (
    DataError,
    OutOfRangeScoreError,
    ProtocolError,
    ScorerError,
    ScorerTimeoutError,
    SchemaError,
    UnreachableError,
)
from .markers import Polarity

logger = logging.getLogger(__name__)

SCORER_ENV_VAR = "DMWL_SCORER"


class Assignment(str, Enum):
    POSITIVE = "positive"
    NEGATIVE = "negative"
    UNDECIDED = "undecided"


@dataclass(frozen=True)
class HighConfidenceThresholds:
    """Strict cutoffs for turning a score into a weak label."""

    pos_min: float = 0.9
    neg_max: float = 0.1

    def __post_init__(self):
        if not (0.0 <= self.neg_max < self.pos_min <= 1.0):
            raise DataError(
                f"need 0 <= neg_max < pos_min <= 1, got {self.neg_max}/{self.pos_min}"
            )


DEFAULT_THRESHOLDS = HighConfidenceThresholds()


def classify_high_confidence(
    score: float, thresholds: HighConfidenceThresholds = DEFAULT_THRESHOLDS
) -> Assignment:
    """Positive iff score > pos_min, negative iff score < neg_max, else undecided.

    Both inequalities are strict: a score exactly at a cutoff stays undecided.
    """
    if not (0.0 <= score <= 1.0):
        raise OutOfRangeScoreError(f"score outside [0, 1]: {score}")
    if score > thresholds.pos_min:
        return Assignment.POSITIVE
    if score < thresholds.neg_max:
        return Assignment.NEGATIVE
    return Assignment.UNDECIDED


def lexicon_score(text: str, lexicon) -> float:
    """Symmetric hit-ratio score from a token -> polarity lexicon.

    With p positive and q negative hits over the tokenized text, the score
    is 0.5 + 0.5 * (p - q) / (p + q), or the neutral 0.5 when nothing hits.
    """
    p = q = 0
    for token in tokenize(text):
        polarity = lexicon.get(token.lower())
        if polarity == Polarity.POSITIVE:
            p += 1
        elif polarity == Polarity.NEGATIVE:
            q += 1
    if p + q == 0:
        return 0.5
    return 0.5 + 0.5 * (p - q) / (p + q)


def load_lexicon(path) -> dict[str, Polarity]:
    """Read {"positive": [...], "negative": [...]} from JSON; keys lowercased."""
    with open(path, encoding="utf-8") as f:
        try:
            payload = json.load(f)
        except json.JSONDecodeError as e:
            raise SchemaError(f"lexicon is not valid JSON: {e}") from e
    if not isinstance(payload, dict) or set(payload) - {"positive", "negative"}:
        raise SchemaError("lexicon must be an object with 'positive' and 'negative' lists")
    lexicon: dict[str, Polarity] = {}
    for key, polarity in (("positive", Polarity.POSITIVE), ("negative", Polarity.NEGATIVE)):
        for word in payload.get(key, []):
            lexicon[str(word).lower()] = polarity
    return lexicon


def save_lexicon(path, lexicon) -> None:
    payload = {
        "positive": sorted(w for w, p in lexicon.items() if p == Polarity.POSITIVE),
        "negative": sorted(w for w, p in lexicon.items() if p == Polarity.NEGATIVE),
    }
    with open(path, "w", encoding="utf-8") as f:
        f.write(json.dumps(payload, ensure_ascii=False, sort_keys=True, separators=(",", ":")))
        f.write("\n")


class ConfidenceScorer:
    """Contract: score_batch(texts) -> one probability-of-positive per text."""

    name = "scorer"

    def score_batch(self, texts) -> list[float]:
        raise NotImplementedError


class LexiconScorer(ConfidenceScorer):
    """Stateless scorer over a fixed lexicon; safe for concurrent use."""

    def __init__(self, lexicon, name: str = "lexicon"):
        self.lexicon = dict(lexicon)
        self.name = name

    def score_batch(self, texts) -> list[float]:
        return [lexicon_score(t, self.lexicon) for t in texts]


class _StdioTransport:
    """Child process speaking the line protocol on its standard streams."""

    def __init__(self, command: str):
        self.command = command
        try:
            self.proc = subprocess.Popen(
                shlex.split(command),
                stdin=subprocess.PIPE,
                stdout=subprocess.PIPE,
                text=True,
                bufsize=1,
            )
        except OSError as e:
            raise UnreachableError(f"cannot start scorer process {command!r}: {e}") from e
        self._lines: queue.Queue = queue.Queue()
        self._reader = threading.Thread(target=self._pump, daemon=True)
        self._reader.start()

    def _pump(self):
        try:
            for line in self.proc.stdout:
                self._lines.put(line)
        except ValueError:
            pass
        finally:
            self._lines.put(None)

    def send_line(self, line: str) -> None:
        try:
            self.proc.stdin.write(line + "\n")
            self.proc.stdin.flush()
        except (OSError, ValueError) as e:
            raise UnreachableError(f"scorer process is gone: {e}") from e

    def recv_line(self, timeout: float) -> str:
        try:
            line = self._lines.get(timeout=timeout)
        except queue.Empty as e:
            raise ScorerTimeoutError(f"no response within {timeout} s") from e
        if line is None:
            raise UnreachableError("scorer process closed its output")
        return line

    def close(self):
        try:
            if self.proc.stdin:
                self.proc.stdin.close()
            self.proc.terminate()
            self.proc.wait(timeout=2)
        except Exception:
            pass


class _TcpTransport:
    """TCP connection speaking the line protocol."""

    def __init__(self, host: str, port: int, timeout: float):
        try:
            self.sock = socket.create_connection((host, port), timeout=timeout)
        except OSError as e:
            raise UnreachableError(f"cannot connect to scorer at {host}:{port}: {e}") from e
        self.file = self.sock.makefile("rw", encoding="utf-8", newline="\n")

    def send_line(self, line: str) -> None:
        try:
            self.file.write(line + "\n")
            self.file.flush()
        except OSError as e:
            raise UnreachableError(f"scorer connection is gone: {e}") from e

    def recv_line(self, timeout: float) -> str:
        self.sock.settimeout(timeout)
        try:
            line = self.file.readline()
        except socket.timeout as e:
            raise ScorerTimeoutError(f"no response within {timeout} s") from e
        except OSError as e:
            raise UnreachableError(f"scorer connection is gone: {e}") from e
        if not line:
            raise UnreachableError("scorer closed the connection")
        return line

    def close(self):
        try:
            self.file.close()
            self.sock.close()
        except Exception:
            pass


def _parse_endpoint(endpoint: str):
    if endpoint.startswith("tcp://"):
        rest = endpoint[len("tcp://") :]
        host, _, port = rest.rpartition(":")
        if not host or not port.isdigit():
            raise DataError(f"bad TCP scorer endpoint: {endpoint!r}")
        return ("tcp", host, int(port))
    return ("stdio", endpoint, None)


class ScorerClient:
    """Batched line-protocol client with retry on transient failures.

    Requests are sent one batch at a time and answered in order; ids are
    matched strictly. Transport-level failures are retried up to three
    attempts with exponential backoff; protocol violations are not.
    """

    MAX_ATTEMPTS = 3
    BACKOFF_BASE = 0.1

    def __init__(self, endpoint: str, timeout: float = 30.0):
        self.endpoint = endpoint
        self.timeout = timeout
        self._kind, self._target, self._port = _parse_endpoint(endpoint)
        self._transport = None
        self._next_id = 1

    def _connect(self):
        if self._transport is None:
            if self._kind == "tcp":
                self._transport = _TcpTransport(self._target, self._port, self.timeout)
            else:
                self._transport = _StdioTransport(self._target)
        return self._transport

    def _reset(self):
        if self._transport is not None:
            self._transport.close()
            self._transport = None

    def score(self, texts: list[str]) -> list[float]:
        if not texts:
            return []
        request_id = self._next_id
        self._next_id += 1
        line = json.dumps({"id": request_id, "texts": list(texts)}, ensure_ascii=False)
        last_error: Exception | None = None
        for attempt in range(self.MAX_ATTEMPTS):
            if attempt:
                time.sleep(self.BACKOFF_BASE * 2 ** (attempt - 1))
            try:
                transport = self._connect()
                transport.send_line(line)
                reply = transport.recv_line(self.timeout)
                return _parse_scores(reply, request_id, len(texts))
            except (UnreachableError, ScorerTimeoutError) as e:
                logger.warning("scorer attempt %d/%d failed: %s", attempt + 1, self.MAX_ATTEMPTS, e)
                last_error = e
                self._reset()
        raise last_error

    def close(self):
        self._reset()


def _parse_scores(line: str, request_id: int, expected: int) -> list[float]:
    try:
        obj = json.loads(line)
    except json.JSONDecodeError as e:
        raise ProtocolError(f"scorer response is not valid JSON: {line!r}") from e
    if not isinstance(obj, dict):
        raise ProtocolError(f"scorer response is not an object: {line!r}")
    if obj.get("id") != request_id:
        raise ProtocolError(f"response id {obj.get('id')!r} does not match request {request_id}")
    if "error" in obj:
        raise ScorerError(str(obj["error"]))
    scores = obj.get("scores")
    if not isinstance(scores, list) or len(scores) != expected:
        got = len(scores) if isinstance(scores, list) else scores
        raise ProtocolError(f"expected {expected} scores, got {got!r}")
    out = []
    for s in scores:
        if not isinstance(s, (int, float)) or isinstance(s, bool) or not (0.0 <= s <= 1.0):
            raise ProtocolError(f"score outside [0, 1] or not a number: {s!r}")
        out.append(float(s))
    return out


def remote_score_batch(endpoint: str, texts, batch_size: int = 64, timeout: float = 30.0) -> list[float]:
    """Score texts through a remote endpoint in order-preserving batches."""
    if batch_size < 1:
        raise DataError(f"batch_size must be >= 1, got {batch_size}")
    texts = list(texts)
    if not texts:
        return []
    client = ScorerClient(endpoint, timeout=timeout)
    try:
        scores: list[float] = []
        for i in range(0, len(texts), batch_size):
            scores.extend(client.score(texts[i : i + batch_size]))
        return scores
    finally:
        client.close()


class RemoteScorer(ConfidenceScorer):
    """ConfidenceScorer backed by one persistent line-protocol connection.

    The underlying transport is single-client; calls are serialized with a
    lock so a shared instance stays safe inside a parallel pipeline.
    """

    def __init__(self, endpoint: str, batch_size: int = 64, timeout: float = 30.0):
        if batch_size < 1:
            raise DataError(f"batch_size must be >= 1, got {batch_size}")
        self.endpoint = endpoint
        self.batch_size = batch_size
        self.name = endpoint
        self._client = ScorerClient(endpoint, timeout=timeout)
        self._lock = threading.Lock()

    def score_batch(self, texts) -> list[float]:
        texts = list(texts)
        with self._lock:
            scores: list[float] = []
            for i in range(0, len(texts), self.batch_size):
                scores.extend(self._client.score(texts[i : i + self.batch_size]))
            return scores

    def close(self):
        self._client.close()


def resolve_scorer(spec: str | None, batch_size: int = 64, timeout: float = 30.0) -> ConfidenceScorer | None:
    """Build a scorer from an endpoint string.

    Forms: "lexicon:PATH" for the built-in lexicon scorer, "tcp://HOST:PORT"
    for a TCP line-protocol server, anything else is a command line to spawn
    as a stdio line-protocol child. Falls back to the DMWL_SCORER
    environment variable; returns None when neither is set.
    """
    spec = spec or os.environ.get(SCORER_ENV_VAR)
    if not spec:
        return None
    if spec.startswith("lexicon:"):
        path = spec[len("lexicon:") :]
        return LexiconScorer(load_lexicon(path), name=spec)
    return RemoteScorer(spec, batch_size=batch_size, timeout=timeout)
