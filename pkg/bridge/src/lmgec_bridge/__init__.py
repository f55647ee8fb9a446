"""Transformer language-model scorer for the NDJSON sentence-scoring protocol."""

from .scoring import MODES, BridgeConfig, CausalScorer, MaskedScorer, load_scorer
from .server import handle_line, serve_stdio, serve_stream, serve_tcp

__all__ = [
    "MODES",
    "BridgeConfig",
    "CausalScorer",
    "MaskedScorer",
    "load_scorer",
    "handle_line",
    "serve_stdio",
    "serve_stream",
    "serve_tcp",
]
