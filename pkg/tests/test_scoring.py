import json
import math
import random
import socket
import socketserver
import sys
import threading
from pathlib import Path

import pytest

from dmwl import (
    Assignment,
    HighConfidenceThresholds,
    LexiconScorer,
    Polarity,
    RemoteScorer,
    classify_high_confidence,
    lexicon_score,
    load_lexicon,
    remote_score_batch,
    resolve_scorer,
    save_lexicon,
)
from dmwl.errors import (
    DataError,
    OutOfRangeScoreError,
    ProtocolError,
    ScorerError,
    ScorerTimeoutError,
    UnreachableError,
)

FAKE = f"{sys.executable} {Path(__file__).parent / 'fake_scorer.py'}"


class TestClassify:
    def test_high_positive(self):
        assert classify_high_confidence(0.95) == Assignment.POSITIVE

    def test_middle_undecided(self):
        assert classify_high_confidence(0.5) == Assignment.UNDECIDED

    def test_boundaries_are_strict(self):
        assert classify_high_confidence(0.9) == Assignment.UNDECIDED
        assert classify_high_confidence(0.1) == Assignment.UNDECIDED

    def test_low_negative(self):
        assert classify_high_confidence(0.05) == Assignment.NEGATIVE

    def test_out_of_range(self):
        with pytest.raises(OutOfRangeScoreError):
            classify_high_confidence(1.5)
        with pytest.raises(OutOfRangeScoreError):
            classify_high_confidence(-0.1)

    def test_monotone(self):
        order = {Assignment.NEGATIVE: 0, Assignment.UNDECIDED: 1, Assignment.POSITIVE: 2}
        previous = 0
        for i in range(101):
            rank = order[classify_high_confidence(i / 100)]
            assert rank >= previous
            previous = rank

    def test_threshold_validation(self):
        with pytest.raises(DataError):
            HighConfidenceThresholds(pos_min=0.2, neg_max=0.3)


class TestLexiconScore:
    def test_all_positive(self):
        assert lexicon_score("great great day", {"great": Polarity.POSITIVE}) == 1.0

    def test_no_hits_neutral(self):
        assert lexicon_score("the of and", {"great": Polarity.POSITIVE}) == 0.5

    def test_mixed_hits(self):
        lexicon = {"good": Polarity.POSITIVE, "bad": Polarity.NEGATIVE}
        # p=2, q=1 -> 0.5 + 0.5 * (1/3)
        assert math.isclose(lexicon_score("good good bad", lexicon), 0.5 + 0.5 / 3)

    def test_case_insensitive(self):
        assert lexicon_score("GREAT day", {"great": Polarity.POSITIVE}) == 1.0

    def test_antisymmetry(self):
        rng = random.Random(1)
        words = ["up", "down", "flat", "spin", "calm", "storm"]
        lexicon = {"up": Polarity.POSITIVE, "storm": Polarity.NEGATIVE, "calm": Polarity.POSITIVE}
        flipped = {
            w: (Polarity.NEGATIVE if p == Polarity.POSITIVE else Polarity.POSITIVE)
            for w, p in lexicon.items()
        }
        for _ in range(100):
            text = " ".join(rng.choice(words) for _ in range(rng.randint(0, 12)))
            s = lexicon_score(text, lexicon)
            assert 0.0 <= s <= 1.0
            assert math.isclose(s, 1.0 - lexicon_score(text, flipped))

    def test_file_round_trip(self, tmp_path):
        lexicon = {"fine": Polarity.POSITIVE, "awful": Polarity.NEGATIVE}
        path = tmp_path / "lex.json"
        save_lexicon(path, lexicon)
        assert load_lexicon(path) == lexicon


class TestRemoteStdio:
    def test_empty_input_no_request(self):
        # endpoint is bogus on purpose: nothing must be spawned for 0 texts
        assert remote_score_batch("/nonexistent/scorer", []) == []

    def test_batching_arithmetic(self):
        # idscore mode exposes request ids: 3 texts at batch_size 2 -> 2 requests
        scores = remote_score_batch(f"{FAKE} idscore", ["a", "b", "c"], batch_size=2)
        assert scores == [0.1, 0.1, 0.2]

    def test_order_and_length_preserved(self):
        texts = ["x" * i for i in range(1, 8)]
        for batch_size in (1, 2, 3, 7, 50):
            scores = remote_score_batch(f"{FAKE} length", texts, batch_size=batch_size)
            assert scores == [min(1.0, len(t) / 10.0) for t in texts]

    def test_mismatched_count_is_protocol_error(self):
        with pytest.raises(ProtocolError):
            remote_score_batch(f"{FAKE} mismatch", ["a", "b"])

    def test_error_field_is_scorer_error(self):
        with pytest.raises(ScorerError):
            remote_score_batch(f"{FAKE} error", ["a"])

    def test_garbage_is_protocol_error(self):
        with pytest.raises(ProtocolError):
            remote_score_batch(f"{FAKE} garbage", ["a"])

    def test_wrong_id_is_protocol_error(self):
        with pytest.raises(ProtocolError):
            remote_score_batch(f"{FAKE} wrongid", ["a"])

    def test_unreachable_command(self):
        with pytest.raises(UnreachableError):
            remote_score_batch("/nonexistent/scorer", ["a"])

    def test_timeout(self):
        with pytest.raises(ScorerTimeoutError):
            remote_score_batch(f"{FAKE} hang", ["a"], timeout=0.2)

    def test_remote_scorer_persistent(self):
        scorer = RemoteScorer(f"{FAKE} idscore", batch_size=2)
        try:
            assert scorer.score_batch(["a", "b", "c"]) == [0.1, 0.1, 0.2]
            # ids keep counting on the same process
            assert scorer.score_batch(["d"]) == [0.3]
        finally:
            scorer.close()


class _TcpHandler(socketserver.StreamRequestHandler):
    def handle(self):
        for raw in self.rfile:
            request = json.loads(raw)
            response = {"id": request["id"], "scores": [0.25] * len(request["texts"])}
            self.wfile.write((json.dumps(response) + "\n").encode("utf-8"))
            self.wfile.flush()


class TestRemoteTcp:
    def test_tcp_round_trip(self):
        server = socketserver.ThreadingTCPServer(("127.0.0.1", 0), _TcpHandler)
        port = server.server_address[1]
        thread = threading.Thread(target=server.serve_forever, daemon=True)
        thread.start()
        try:
            scores = remote_score_batch(f"tcp://127.0.0.1:{port}", ["a", "b"], batch_size=1)
            assert scores == [0.25, 0.25]
        finally:
            server.shutdown()
            server.server_close()

    def test_unreachable_port(self):
        sock = socket.socket()
        sock.bind(("127.0.0.1", 0))
        port = sock.getsockname()[1]
        sock.close()  # nothing listens here now
        with pytest.raises(UnreachableError):
            remote_score_batch(f"tcp://127.0.0.1:{port}", ["a"], timeout=0.5)


class TestResolveScorer:
    def test_lexicon_endpoint(self, tmp_path):
        path = tmp_path / "lex.json"
        save_lexicon(path, {"fine": Polarity.POSITIVE})
        scorer = resolve_scorer(f"lexicon:{path}")
        assert isinstance(scorer, LexiconScorer)
        assert scorer.score_batch(["fine day"]) == [1.0]

    def test_none_when_unset(self, monkeypatch):
        monkeypatch.delenv("DMWL_SCORER", raising=False)
        assert resolve_scorer(None) is None

    def test_env_fallback(self, monkeypatch, tmp_path):
        path = tmp_path / "lex.json"
        save_lexicon(path, {"fine": Polarity.POSITIVE})
        monkeypatch.setenv("DMWL_SCORER", f"lexicon:{path}")
        scorer = resolve_scorer(None)
        assert isinstance(scorer, LexiconScorer)
