"""NDJSON scoring loop over stdio or a TCP socket.

One JSON object per line.  Requests are {"id": N, "tokens": [...]} and
responses {"id": N, "logprob": F} or {"id": N, "error": MSG}; the request
{"id": 0, "tokens": []} is a health ping answered with logprob 0.0.
Responses are written in request order and correlated by id, so clients
may pipeline requests with arbitrary ids.  A line whose id cannot be
recovered is answered with id -1, which no live request ever uses; a
correlating client just skips it.
"""

from __future__ import annotations

import json
import logging
import math
import socket
import sys

log = logging.getLogger("lmgec_bridge")


def handle_line(scorer, line: str) -> dict | None:
    """Response object for one request line; None for a blank line."""
    text = line.strip()
    if not text:
        return None
    try:
        request = json.loads(text)
    except json.JSONDecodeError:
        return {"id": -1, "error": "invalid JSON"}
    if not isinstance(request, dict):
        return {"id": -1, "error": "request must be a JSON object"}
    rid = request.get("id")
    # bool is an int subclass but makes no sense as a correlation id
    if isinstance(rid, bool) or not isinstance(rid, int) or rid < 0:
        return {"id": -1, "error": "id must be a non-negative integer"}
    tokens = request.get("tokens")
    if not isinstance(tokens, list) or not all(isinstance(t, str) for t in tokens):
        return {"id": rid, "error": "tokens must be a list of strings"}
    if not tokens:
        if rid == 0:
            return {"id": 0, "logprob": 0.0}
        return {"id": rid, "error": "empty token list"}
    try:
        value = scorer.logprob(tokens)
    except ValueError as exc:
        return {"id": rid, "error": str(exc)}
    except RuntimeError as exc:  # tensor-level failures surface here
        return {"id": rid, "error": f"scoring failed: {exc}"}
    if not math.isfinite(value):
        return {"id": rid, "error": f"non-finite score {value!r}"}
    return {"id": rid, "logprob": value}


def serve_stream(scorer, reader, writer) -> None:
    """Answer requests until EOF; every response is flushed immediately."""
    for line in reader:
        response = handle_line(scorer, line)
        if response is None:
            continue
        writer.write(json.dumps(response, separators=(",", ":")) + "\n")
        writer.flush()


def serve_stdio(scorer) -> None:
    serve_stream(scorer, sys.stdin, sys.stdout)


def serve_tcp(scorer, host: str, port: int) -> None:
    """Sequential accept loop: one client at a time, scoring is synchronous.
    Spawn several bridge processes for parallelism."""
    with socket.create_server((host, port)) as server:
        bound_host, bound_port = server.getsockname()[:2]
        log.info("listening on %s:%d", bound_host, bound_port)
        while True:
            conn, peer = server.accept()
            log.info("client %s:%d connected", peer[0], peer[1])
            with conn:
                reader = conn.makefile("r", encoding="utf-8", newline="\n")
                writer = conn.makefile("w", encoding="utf-8", newline="\n")
                try:
                    serve_stream(scorer, reader, writer)
                except (BrokenPipeError, ConnectionResetError):
                    log.info("client dropped the connection")
                finally:
                    reader.close()
                    try:
                        writer.close()
                    except (BrokenPipeError, ConnectionResetError):
                        pass
            log.info("client disconnected")
