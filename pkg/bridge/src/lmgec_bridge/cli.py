"""Command line entry: load the model, then serve the wire protocol."""

from __future__ import annotations

import argparse
import logging
import sys

from .scoring import MODES, BridgeConfig, load_scorer
from .server import log, serve_stdio, serve_tcp


def _host_port(text: str) -> tuple[str, int]:
    host, sep, port = text.rpartition(":")
    if not sep or not host or not port.isdigit():
        raise argparse.ArgumentTypeError(f"expected HOST:PORT, got {text!r}")
    return host, int(port)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="lmgec-bridge",
        description="Score sentences with a Transformer language model, "
        "speaking newline-delimited JSON on stdio or TCP.",
    )
    parser.add_argument("--model", required=True, help="model name or directory")
    parser.add_argument(
        "--mode",
        choices=MODES,
        default="causal",
        help="causal log-likelihood or masked pseudo-log-likelihood",
    )
    parser.add_argument("--device", default="cpu", help="torch device spec")
    parser.add_argument(
        "--max-batch",
        type=int,
        default=16,
        metavar="N",
        help="masked variants scored per forward pass",
    )
    parser.add_argument(
        "--tcp",
        type=_host_port,
        metavar="HOST:PORT",
        help="serve a TCP socket instead of stdio (port 0 picks a free one)",
    )
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(
        level=logging.INFO, stream=sys.stderr, format="%(name)s: %(message)s"
    )
    try:
        config = BridgeConfig(
            model=args.model,
            mode=args.mode,
            device=args.device,
            max_batch=args.max_batch,
        )
        scorer = load_scorer(config)
    except Exception as exc:  # any load failure must exit nonzero before serving
        log.error("cannot load %r: %s", args.model, exc)
        return 1
    log.info("serving %s in %s mode", args.model, args.mode)
    try:
        if args.tcp is not None:
            serve_tcp(scorer, *args.tcp)
        else:
            serve_stdio(scorer)
    except (KeyboardInterrupt, BrokenPipeError):
        pass
    return 0


if __name__ == "__main__":
    sys.exit(main())
