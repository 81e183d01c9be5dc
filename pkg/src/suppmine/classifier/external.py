"""Clients for external scorers speaking the ndjson wire protocol.

Requests are ``{"id": ..., "text": ...}``, responses ``{"id": ..., "score":
...}`` with score in [0, 1]. Transport is either a spawned subprocess
(one JSON object per line over stdin/stdout, flushed per batch) or HTTP POST
(request body = JSON array of requests). Responses may arrive out of order;
the client re-matches by id. Transport faults (unreachable, timeout) and
protocol faults (malformed or incomplete answers) raise distinct errors.
"""

from __future__ import annotations

import json
import queue
import subprocess
import threading
import time

import requests as _requests

from ..errors import ScorerProtocolError, ScorerTransportError


def encode_request(req_id: str, text: str) -> str:
    return json.dumps({"id": req_id, "text": text}, ensure_ascii=False, separators=(",", ":"))


def encode_response(req_id: str, score: float) -> str:
    return json.dumps({"id": req_id, "score": score}, ensure_ascii=False, separators=(",", ":"))


def _validate_response_obj(obj) -> tuple[str, float]:
    if not isinstance(obj, dict):
        raise ScorerProtocolError(f"response is not an object: {obj!r}")
    if "id" not in obj or "score" not in obj:
        raise ScorerProtocolError(f"response missing id/score: {obj!r}")
    score = obj["score"]
    if isinstance(score, bool) or not isinstance(score, (int, float)):
        raise ScorerProtocolError(f"score is not a number: {obj!r}")
    if not 0.0 <= float(score) <= 1.0:
        raise ScorerProtocolError(f"score {score!r} outside [0, 1] for id {obj['id']!r}")
    return obj["id"], float(score)


def _match_responses(expected_ids, pairs) -> dict[str, float]:
    scores: dict[str, float] = {}
    expected = set(expected_ids)
    for req_id, score in pairs:
        if req_id not in expected:
            raise ScorerProtocolError(f"response for unknown id {req_id!r}")
        if req_id in scores:
            raise ScorerProtocolError(f"duplicate response for id {req_id!r}")
        scores[req_id] = score
    missing = expected - scores.keys()
    if missing:
        raise ScorerProtocolError(f"no response for ids: {sorted(missing)}")
    return scores


class _BatchedScorer:
    """Shared batching logic; subclasses implement score_batch."""

    batch_size: int

    def score_batch(self, requests_batch):
        raise NotImplementedError

    def score_texts(self, texts) -> list[float]:
        scores: list[float] = []
        texts = list(texts)
        for start in range(0, len(texts), self.batch_size):
            chunk = texts[start : start + self.batch_size]
            ids = [f"q{start + i}" for i in range(len(chunk))]
            answered = self.score_batch(list(zip(ids, chunk)))
            scores.extend(answered[i] for i in ids)
        return scores


class SubprocessScorer(_BatchedScorer):
    """Scorer spoken to over the stdin/stdout of a spawned process."""

    def __init__(self, cmd, batch_size: int = 64, timeout: float = 30.0):
        self.cmd = list(cmd)
        self.batch_size = int(batch_size)
        self.timeout = float(timeout)
        self._proc = None
        self._lines: queue.Queue = queue.Queue()

    def _ensure_started(self):
        if self._proc is not None:
            return
        try:
            self._proc = subprocess.Popen(
                self.cmd,
                stdin=subprocess.PIPE,
                stdout=subprocess.PIPE,
                text=True,
                bufsize=1,
            )
        except OSError as exc:
            raise ScorerTransportError(f"cannot start scorer {self.cmd!r}: {exc}") from exc

        def _pump(stdout, sink):
            for line in stdout:
                sink.put(line)
            sink.put(None)

        threading.Thread(
            target=_pump, args=(self._proc.stdout, self._lines), daemon=True
        ).start()

    def score_batch(self, requests_batch) -> dict[str, float]:
        self._ensure_started()
        try:
            for req_id, text in requests_batch:
                self._proc.stdin.write(encode_request(req_id, text) + "\n")
            self._proc.stdin.flush()
        except (BrokenPipeError, OSError) as exc:
            raise ScorerTransportError(f"scorer process pipe failed: {exc}") from exc

        expected = [req_id for req_id, _ in requests_batch]
        deadline = time.monotonic() + self.timeout
        pairs = []
        answered: set[str] = set()
        while len(pairs) < len(expected):
            remaining = deadline - time.monotonic()
            if remaining <= 0:
                raise ScorerTransportError(
                    f"scorer timed out after {self.timeout}s; "
                    f"missing ids: {sorted(set(expected) - answered)}"
                )
            try:
                line = self._lines.get(timeout=remaining)
            except queue.Empty:
                continue
            if line is None:
                raise ScorerProtocolError(
                    "scorer closed its output stream; "
                    f"no response for ids: {sorted(set(expected) - answered)}"
                )
            if not line.strip():
                continue
            try:
                obj = json.loads(line)
            except json.JSONDecodeError as exc:
                raise ScorerProtocolError(f"malformed response line: {line!r}") from exc
            pair = _validate_response_obj(obj)
            pairs.append(pair)
            answered.add(pair[0])
        return _match_responses(expected, pairs)

    def close(self):
        if self._proc is not None:
            try:
                self._proc.stdin.close()
            except OSError:
                pass
            try:
                self._proc.wait(timeout=5)
            except subprocess.TimeoutExpired:
                self._proc.kill()
                self._proc.wait()
            self._proc = None

    def __enter__(self):
        self._ensure_started()
        return self

    def __exit__(self, *exc_info):
        self.close()


class HttpScorer(_BatchedScorer):
    """Scorer behind an HTTP endpoint taking a JSON array of requests."""

    def __init__(self, url: str, batch_size: int = 64, timeout: float = 30.0):
        self.url = url
        self.batch_size = int(batch_size)
        self.timeout = float(timeout)

    def score_batch(self, requests_batch) -> dict[str, float]:
        body = [{"id": req_id, "text": text} for req_id, text in requests_batch]
        try:
            resp = _requests.post(self.url, json=body, timeout=self.timeout)
        except _requests.RequestException as exc:
            raise ScorerTransportError(f"scorer endpoint unreachable: {exc}") from exc
        if resp.status_code != 200:
            raise ScorerTransportError(
                f"scorer endpoint returned HTTP {resp.status_code}"
            )
        try:
            payload = resp.json()
        except ValueError as exc:
            raise ScorerProtocolError("scorer response body is not JSON") from exc
        if not isinstance(payload, list):
            raise ScorerProtocolError("scorer response body must be a JSON array")
        pairs = [_validate_response_obj(obj) for obj in payload]
        return _match_responses([rid for rid, _ in requests_batch], pairs)
