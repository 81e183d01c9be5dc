"""Wire-protocol transports: ndjson over stdio, or JSON arrays over HTTP.

Responses are framed exactly like the engine's reference client encodes them
(compact separators, id before score). A malformed request produces a per-id
error object and the stream stays alive.
"""

from __future__ import annotations

import json
import sys
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer


def _frame(obj: dict) -> str:
    return json.dumps(obj, ensure_ascii=False, separators=(",", ":"))


def _score_request(score_fn, obj) -> dict:
    if not isinstance(obj, dict):
        return {"id": None, "error": "request must be a JSON object"}
    req_id = obj.get("id")
    text = obj.get("text")
    if not isinstance(text, str):
        return {"id": req_id, "error": "request must carry a string 'text'"}
    return {"id": req_id, "score": float(score_fn([text])[0])}


def serve_stdio(score_fn, stdin=None, stdout=None) -> None:
    """Answer requests line by line until stdin closes."""
    stdin = stdin if stdin is not None else sys.stdin
    stdout = stdout if stdout is not None else sys.stdout
    for line in stdin:
        line = line.strip()
        if not line:
            continue
        try:
            obj = json.loads(line)
        except json.JSONDecodeError:
            stdout.write(_frame({"id": None, "error": "malformed request line"}) + "\n")
            stdout.flush()
            continue
        stdout.write(_frame(_score_request(score_fn, obj)) + "\n")
        stdout.flush()


def make_http_server(score_fn, host: str, port: int) -> ThreadingHTTPServer:
    class Handler(BaseHTTPRequestHandler):
        def do_POST(self):
            length = int(self.headers.get("Content-Length", "0"))
            try:
                body = json.loads(self.rfile.read(length))
            except json.JSONDecodeError:
                self._reply(400, {"error": "body is not valid JSON"})
                return
            if not isinstance(body, list):
                self._reply(400, {"error": "body must be a JSON array of requests"})
                return
            self._reply(200, [_score_request(score_fn, obj) for obj in body])

        def _reply(self, status: int, payload) -> None:
            data = _frame(payload).encode("utf-8") if isinstance(payload, dict) else json.dumps(
                payload, ensure_ascii=False, separators=(",", ":")
            ).encode("utf-8")
            self.send_response(status)
            self.send_header("Content-Type", "application/json")
            self.send_header("Content-Length", str(len(data)))
            self.end_headers()
            self.wfile.write(data)

        def log_message(self, *args):
            pass

    return ThreadingHTTPServer((host, port), Handler)


def serve_http(score_fn, host: str, port: int) -> None:
    server = make_http_server(score_fn, host, port)
    print(f"scorer listening on http://{host}:{server.server_address[1]}", file=sys.stderr)
    server.serve_forever()
