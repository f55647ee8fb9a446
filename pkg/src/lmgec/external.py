"""Client for out-of-process sentence scorers.

Wire protocol: newline-delimited JSON, UTF-8, one object per line.
Request ``{"id": N, "tokens": [...]}``; response either
``{"id": N, "logprob": F}`` or ``{"id": N, "error": MSG}``.  Responses may
arrive out of order; the id correlates them.  ``{"id": 0, "tokens": []}``
is a health ping and must come back as ``{"id": 0, "logprob": 0.0}``.
"""

from __future__ import annotations

import itertools
import json
import math
import socket
import subprocess
import threading
from typing import IO, Optional, Sequence

DEFAULT_TIMEOUT = 30.0


class ScorerError(Exception):
    """Base class for scorer failures."""


class ScorerUnavailableError(ScorerError):
    """The scorer process or connection is gone, or never answered."""


class ScoreResponseError(ScorerError):
    """The scorer answered a request with an error message."""

    def __init__(self, message: str, index: Optional[int] = None):
        super().__init__(message)
        self.message = message
        # Position within the batch that failed, when scored via score_batch.
        self.index = index


class _Pending:
    __slots__ = ("event", "logprob", "error")

    def __init__(self):
        self.event = threading.Event()
        self.logprob: Optional[float] = None
        self.error: Optional[str] = None


def _surfaces(sentence) -> list[str]:
    if hasattr(sentence, "surfaces"):
        return list(sentence.surfaces)
    return list(sentence)


class ExternalScorer:
    """Thread-safe client; requests may be pipelined from several threads."""

    def __init__(
        self,
        reader: IO[str],
        writer: IO[str],
        *,
        timeout: float = DEFAULT_TIMEOUT,
        proc: Optional[subprocess.Popen] = None,
        sock: Optional[socket.socket] = None,
        verify: bool = True,
    ):
        self._reader = reader
        self._writer = writer
        self._proc = proc
        self._sock = sock
        self.timeout = timeout
        self._ids = itertools.count(1)
        self._lock = threading.Lock()
        self._wlock = threading.Lock()
        self._pending: dict[int, _Pending] = {}
        self._closed = False
        self._dead_reason: Optional[str] = None
        self._thread = threading.Thread(target=self._read_loop, daemon=True)
        self._thread.start()
        if verify:
            self.ping()

    @classmethod
    def from_command(
        cls, argv: Sequence[str], *, timeout: float = DEFAULT_TIMEOUT, verify: bool = True
    ) -> "ExternalScorer":
        if not argv:
            raise ValueError("empty scorer command")
        try:
            proc = subprocess.Popen(
                list(argv),
                stdin=subprocess.PIPE,
                stdout=subprocess.PIPE,
                encoding="utf-8",
                bufsize=1,
            )
        except OSError as exc:
            raise ScorerUnavailableError(f"cannot start scorer {argv[0]!r}: {exc}") from exc
        try:
            return cls(proc.stdout, proc.stdin, timeout=timeout, proc=proc, verify=verify)
        except ScorerError:
            proc.kill()
            proc.wait()
            raise

    @classmethod
    def from_tcp(
        cls, host: str, port: int, *, timeout: float = DEFAULT_TIMEOUT, verify: bool = True
    ) -> "ExternalScorer":
        try:
            sock = socket.create_connection((host, port), timeout=timeout)
        except OSError as exc:
            raise ScorerUnavailableError(f"cannot connect to {host}:{port}: {exc}") from exc
        sock.settimeout(None)
        reader = sock.makefile("r", encoding="utf-8", newline="\n")
        writer = sock.makefile("w", encoding="utf-8", newline="\n")
        try:
            return cls(reader, writer, timeout=timeout, sock=sock, verify=verify)
        except ScorerError:
            sock.close()
            raise

    # -- read side -------------------------------------------------------

    def _read_loop(self) -> None:
        try:
            for line in self._reader:
                line = line.strip()
                if not line:
                    continue
                try:
                    msg = json.loads(line)
                except ValueError:
                    continue
                if not isinstance(msg, dict):
                    continue
                self._dispatch(msg)
        except (OSError, ValueError):
            pass
        self._fail_all("scorer closed its output stream")

    def _dispatch(self, msg: dict) -> None:
        req_id = msg.get("id")
        if not isinstance(req_id, int):
            return
        with self._lock:
            pending = self._pending.get(req_id)
        if pending is None:
            return
        if "logprob" in msg and isinstance(msg["logprob"], (int, float)) and math.isfinite(msg["logprob"]):
            pending.logprob = float(msg["logprob"])
        elif "error" in msg:
            pending.error = str(msg["error"])
        else:
            pending.error = f"malformed response: {msg!r}"
        pending.event.set()

    def _fail_all(self, reason: str) -> None:
        with self._lock:
            self._dead_reason = self._dead_reason or reason
            pending = list(self._pending.values())
        for p in pending:
            # Unanswered waiters see both slots empty and report unavailability.
            p.event.set()

    # -- write side ------------------------------------------------------

    def _send(self, req_id: int, tokens: list[str]) -> _Pending:
        pending = _Pending()
        with self._lock:
            if self._dead_reason is not None:
                raise ScorerUnavailableError(self._dead_reason)
            self._pending[req_id] = pending
        payload = json.dumps({"id": req_id, "tokens": tokens}, ensure_ascii=False)
        try:
            with self._wlock:
                self._writer.write(payload + "\n")
                self._writer.flush()
        except (OSError, ValueError) as exc:
            with self._lock:
                self._pending.pop(req_id, None)
            raise ScorerUnavailableError(f"cannot write to scorer: {exc}") from exc
        return pending

    def _wait(self, req_id: int, pending: _Pending, index: Optional[int] = None) -> float:
        try:
            if not pending.event.wait(self.timeout):
                raise ScorerUnavailableError(
                    f"scorer did not answer request {req_id} within {self.timeout}s"
                )
            if pending.logprob is not None:
                return pending.logprob
            if pending.error is not None:
                raise ScoreResponseError(pending.error, index=index)
            raise ScorerUnavailableError(self._dead_reason or "scorer went away")
        finally:
            with self._lock:
                self._pending.pop(req_id, None)

    # -- public API -------------------------------------------------------

    def ping(self) -> None:
        """Round-trip the id-0 health check; raises if it comes back wrong."""
        pending = self._send(0, [])
        value = self._wait(0, pending)
        if value != 0.0:
            raise ScoreResponseError(f"bad ping response: logprob {value!r}")

    def score(self, sentence) -> float:
        req_id = next(self._ids)
        pending = self._send(req_id, _surfaces(sentence))
        return self._wait(req_id, pending)

    def score_batch(self, sentences: Sequence) -> list[float]:
        """Pipelined scoring; raises on the first failed element (its batch
        position is on the exception)."""
        requests = [(next(self._ids), _surfaces(s)) for s in sentences]
        sent: list[tuple[int, _Pending]] = []
        try:
            for req_id, tokens in requests:
                sent.append((req_id, self._send(req_id, tokens)))
            return [
                self._wait(req_id, pending, index=i)
                for i, (req_id, pending) in enumerate(sent)
            ]
        finally:
            with self._lock:
                for req_id, _ in sent:
                    self._pending.pop(req_id, None)

    def close(self) -> None:
        if self._closed:
            return
        self._closed = True
        try:
            self._writer.close()
        except OSError:
            pass
        if self._sock is not None:
            # makefile handles hold io-refs, so close() alone sends no FIN;
            # shutdown also wakes the reader thread blocked on recv
            try:
                self._sock.shutdown(socket.SHUT_RDWR)
            except OSError:
                pass
        if self._proc is not None:
            try:
                self._proc.wait(timeout=5)
            except subprocess.TimeoutExpired:
                self._proc.kill()
                self._proc.wait()
        self._thread.join(timeout=5)
        try:
            self._reader.close()
        except OSError:
            pass
        if self._sock is not None:
            try:
                self._sock.close()
            except OSError:
                pass

    def __enter__(self) -> "ExternalScorer":
        return self

    def __exit__(self, *exc) -> None:
        self.close()
