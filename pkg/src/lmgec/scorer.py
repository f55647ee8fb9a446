"""Uniform scoring interface over the n-gram model and external backends.

A scorer maps a token sequence to a natural-log probability.  Backends are
named by spec strings:

    ngram:<model-path>
    external:cmd:<command line>
    external:tcp:<host>:<port>
"""

from __future__ import annotations

import shlex
from typing import Protocol, Sequence, runtime_checkable

from .external import DEFAULT_TIMEOUT, ExternalScorer, ScorerError, ScorerUnavailableError, ScoreResponseError
from .ngram import NGramModel

__all__ = [
    "Scorer",
    "NGramScorer",
    "ExternalScorer",
    "ScorerError",
    "ScorerUnavailableError",
    "ScoreResponseError",
    "open_scorer",
]


@runtime_checkable
class Scorer(Protocol):
    def score(self, sentence) -> float: ...

    def score_batch(self, sentences: Sequence) -> list[float]: ...

    def close(self) -> None: ...


class NGramScorer:
    """In-process scorer backed by a trained n-gram model."""

    def __init__(self, model: NGramModel):
        self.model = model

    def score(self, sentence) -> float:
        return self.model.score(sentence)

    def score_batch(self, sentences: Sequence) -> list[float]:
        return [self.model.score(s) for s in sentences]

    def close(self) -> None:
        pass

    def __enter__(self) -> "NGramScorer":
        return self

    def __exit__(self, *exc) -> None:
        self.close()


def open_scorer(
    spec: str, *, timeout: float = DEFAULT_TIMEOUT, verify: bool = True
) -> Scorer:
    """Build a scorer from a backend spec string; see module docstring."""
    kind, _, rest = spec.partition(":")
    if kind == "ngram":
        if not rest:
            raise ValueError("ngram spec needs a model path: ngram:<path>")
        return NGramScorer(NGramModel.load(rest))
    if kind == "external":
        mode, _, arg = rest.partition(":")
        if mode == "cmd":
            argv = shlex.split(arg)
            if not argv:
                raise ValueError("external:cmd spec needs a command line")
            return ExternalScorer.from_command(argv, timeout=timeout, verify=verify)
        if mode == "tcp":
            host, _, port_text = arg.rpartition(":")
            if not host or not port_text.isdigit():
                raise ValueError("external:tcp spec needs <host>:<port>")
            return ExternalScorer.from_tcp(host, int(port_text), timeout=timeout, verify=verify)
        raise ValueError(f"unknown external scorer mode {mode!r}")
    raise ValueError(f"unknown scorer spec {spec!r}")
