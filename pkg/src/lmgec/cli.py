"""Command-line surface for the correction pipeline.

Subcommands build resources, train the language model, correct text,
evaluate against gold edits, sweep the acceptance margin, and score
sentences.  Data goes to stdout, logs to stderr.  Exit codes: 0 success,
2 usage or input error, 3 scorer backend failure.
"""

from __future__ import annotations

import argparse
import configparser
import json
import logging
import math
import sys
from typing import IO, Optional, Sequence

from .confusion import CandidateConfig, Lexicon
from .evalm2 import evaluate_corpus, sweep_tau
from .lexicon import (
    FunctionWordSets,
    InflectionDB,
    build_vocab,
    default_function_words,
    dump_vocab,
    load_inflections,
    load_vocab,
    load_word_list,
)
from .ngram import TrainingError, train_ngram
from .scorer import ScorerError, ScorerUnavailableError, open_scorer
from .search import correct_corpus
from .textcore import M2ParseError, Sentence, parse_m2

try:
    from importlib.metadata import version as _dist_version

    VERSION = _dist_version("lmgec")
except Exception:  # pragma: no cover - not installed
    VERSION = "0.0.0"

log = logging.getLogger("lmgec")


def _parse_tau(text: str) -> float:
    if text.strip().lower() == "off":
        return math.inf
    try:
        value = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"tau must be a number or 'off', got {text!r}")
    if math.isnan(value) or value < 0:
        raise argparse.ArgumentTypeError(f"tau must be >= 0, got {text!r}")
    return value


def _format_tau(value: float) -> str:
    return "off" if math.isinf(value) else f"{value:g}"


def _parse_bool(text: str) -> bool:
    lowered = text.strip().lower()
    if lowered in ("1", "true", "yes", "on"):
        return True
    if lowered in ("0", "false", "no", "off"):
        return False
    raise ValueError(f"not a boolean: {text!r}")


def _open_out(path: str) -> IO[str]:
    if path == "-":
        return sys.stdout
    return open(path, "w", encoding="utf-8")


def _read_text(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    with open(path, encoding="utf-8") as fh:
        return fh.read()


def _check_inputs(*paths: Optional[str]) -> None:
    import os

    for p in paths:
        if p and p != "-" and not os.path.isfile(p):
            raise FileNotFoundError(f"input file not found: {p}")


def _sentences_from_lines(text: str) -> list[Sentence]:
    lines = text.split("\n")
    if lines and lines[-1] == "":
        lines.pop()
    return [Sentence.from_surfaces(line.split()) for line in lines]


def _looks_like_m2(text: str) -> bool:
    for line in text.split("\n"):
        if not line.strip():
            continue
        return line == "S" or line.startswith("S ")
    return False


def _load_input_sentences(path: str, fmt: str) -> list[Sentence]:
    text = _read_text(path)
    if fmt == "auto":
        fmt = "m2" if _looks_like_m2(text) else "text"
    if fmt == "m2":
        return [entry.sentence for entry in parse_m2(text)]
    return _sentences_from_lines(text)


def _load_lexicon(args: argparse.Namespace) -> Lexicon:
    vocab = load_vocab(_read_text(args.vocab))
    if args.inflections:
        inflections = load_inflections(_read_text(args.inflections))
        if inflections.skipped_lines:
            log.warning("skipped %d malformed inflection lines", inflections.skipped_lines)
    else:
        log.warning("no inflection table given; morphology candidates disabled")
        inflections = InflectionDB()
    if args.prepositions or args.determiners:
        base = default_function_words()
        preps = (
            load_word_list(_read_text(args.prepositions))
            if args.prepositions
            else base.prepositions
        )
        dets = (
            load_word_list(_read_text(args.determiners))
            if args.determiners
            else base.determiners
        )
        words = FunctionWordSets(tuple(preps), tuple(dets))
    else:
        words = default_function_words()
    return Lexicon(vocab=vocab, inflections=inflections, function_words=words)


def _candidate_config(args: argparse.Namespace) -> CandidateConfig:
    return CandidateConfig(
        oov_policy=args.oov_policy,
        spell_max_distance=args.spell_max_distance,
        spell_max_suggestions=args.spell_max_suggestions,
    )


# -- subcommands --------------------------------------------------------


def cmd_build_vocab(args: argparse.Namespace) -> int:
    _check_inputs(args.corpus)
    text = _read_text(args.corpus)
    tokens = text.split()
    if not tokens:
        log.warning("empty corpus: writing empty vocabulary")
    vocab = build_vocab(tokens, min_count=args.min_count)
    out = _open_out(args.out)
    try:
        out.write(dump_vocab(vocab))
    finally:
        if out is not sys.stdout:
            out.close()
    log.info("vocabulary: %d words", len(vocab))
    return 0


def cmd_train_lm(args: argparse.Namespace) -> int:
    _check_inputs(args.corpus)
    sentences = [s.surfaces for s in _sentences_from_lines(_read_text(args.corpus))]
    model = train_ngram(
        sentences,
        order=args.order,
        min_count=args.min_count,
        smoothing=args.smoothing,
        discount=args.discount,
    )
    model.save(args.out)
    if args.dump:
        with open(args.dump, "w", encoding="utf-8") as fh:
            fh.write(model.dump_text())
    log.info(
        "trained order-%d %s model on %d sentences; vocab %d",
        model.order,
        model.smoothing,
        len(sentences),
        len(model.vocab),
    )
    return 0


def cmd_correct(args: argparse.Namespace) -> int:
    _check_inputs(
        args.input, args.vocab, args.inflections, args.prepositions, args.determiners
    )
    sentences = _load_input_sentences(args.input, args.format)
    lex = _load_lexicon(args)
    scorer = open_scorer(args.scorer, timeout=args.timeout)
    try:
        report = correct_corpus(
            sentences,
            lex,
            scorer,
            args.tau,
            config=_candidate_config(args),
            max_passes=args.max_passes,
            jobs=args.jobs,
        )
    finally:
        scorer.close()
    for idx, message in report.errors:
        log.warning("sentence %d passed through: %s", idx, message)
    out = _open_out(args.out)
    try:
        for sent in report.corrected_sentences():
            out.write(sent.text + "\n")
    finally:
        if out is not sys.stdout:
            out.close()
    if args.edit_log:
        with open(args.edit_log, "w", encoding="utf-8") as fh:
            errors = dict(report.errors)
            for i, res in enumerate(report.results):
                if res is None:
                    record = {"index": i, "error": errors.get(i, "scorer error")}
                else:
                    record = {
                        "index": i,
                        "original_score": res.original_score,
                        "applied": [
                            {
                                "start": a.edit.start,
                                "end": a.edit.end,
                                "replacement": a.edit.replacement,
                                "category": a.edit.type_label,
                                "score_before": a.score_before,
                                "score_after": a.score_after,
                            }
                            for a in res.applied
                        ],
                    }
                fh.write(json.dumps(record) + "\n")
    n_edits = sum(len(r.applied) for r in report.results if r is not None)
    log.info(
        "corrected %d sentences; %d edits applied; %d warnings",
        len(sentences),
        n_edits,
        len(report.errors),
    )
    return 0


def cmd_evaluate(args: argparse.Namespace) -> int:
    _check_inputs(args.hypothesis, args.gold)
    entries = parse_m2(_read_text(args.gold))
    hyps = _load_input_sentences(args.hypothesis, "text")
    if len(hyps) != len(entries):
        raise ValueError(
            f"line count mismatch: {len(hyps)} hypothesis lines, "
            f"{len(entries)} gold sentences"
        )
    report = evaluate_corpus(
        [e.sentence for e in entries],
        hyps,
        [list(e.annotations) for e in entries],
        beta=args.beta,
        max_unchanged_words=args.max_unchanged,
        ignore_case=args.ignore_case,
    )
    out = sys.stdout
    out.write(f"tp\t{report.counts.tp}\n")
    out.write(f"fp\t{report.counts.fp}\n")
    out.write(f"fn\t{report.counts.fn}\n")
    out.write(f"precision\t{report.precision!r}\n")
    out.write(f"recall\t{report.recall!r}\n")
    out.write(f"f_{args.beta:g}\t{report.f_score!r}\n")
    if args.per_sentence:
        with open(args.per_sentence, "w", encoding="utf-8") as fh:
            fh.write("index\tannotator\ttp\tfp\tfn\n")
            for s in report.sentences:
                fh.write(
                    f"{s.index}\t{s.annotator_id}\t{s.counts.tp}\t{s.counts.fp}\t{s.counts.fn}\n"
                )
    return 0


def cmd_sweep_tau(args: argparse.Namespace) -> int:
    _check_inputs(
        args.dev, args.vocab, args.inflections, args.prepositions, args.determiners
    )
    entries = parse_m2(_read_text(args.dev))
    lex = _load_lexicon(args)
    taus = [_parse_tau(t) for t in args.taus.split(",") if t.strip()]
    scorer = open_scorer(args.scorer, timeout=args.timeout)
    try:
        result = sweep_tau(
            entries,
            lex,
            scorer,
            taus,
            beta=args.beta,
            config=_candidate_config(args),
            max_passes=args.max_passes,
            max_unchanged_words=args.max_unchanged,
            ignore_case=args.ignore_case,
            jobs=args.jobs,
        )
    finally:
        scorer.close()
    out = sys.stdout
    out.write("tau\tprecision\trecall\tf\ttp\tfp\tfn\tedits\tscorer_errors\n")

    def row_line(row) -> str:
        return (
            f"{_format_tau(row.tau)}\t{row.precision!r}\t{row.recall!r}\t"
            f"{row.f_score!r}\t{row.counts.tp}\t{row.counts.fp}\t{row.counts.fn}\t"
            f"{row.edits_applied}\t{row.scorer_errors}\n"
        )

    for row in result.rows:
        out.write(row_line(row))
    out.write(row_line(result.best))
    return 0


def cmd_score(args: argparse.Namespace) -> int:
    _check_inputs(args.input)
    sentences = _sentences_from_lines(_read_text(args.input))
    scorer = open_scorer(args.scorer, timeout=args.timeout)
    try:
        scores = scorer.score_batch(sentences)
    finally:
        scorer.close()
    for value in scores:
        sys.stdout.write(f"{value!r}\n")
    return 0


# -- parser -------------------------------------------------------------


def _add_resource_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--vocab", required=True, help="vocabulary file (word count per line)")
    p.add_argument("--inflections", help="inflection table (AGID format)")
    p.add_argument("--prepositions", help="preposition inventory, one per line")
    p.add_argument("--determiners", help="determiner inventory, one per line")
    p.add_argument(
        "--oov-policy",
        choices=("unk", "drop"),
        default="unk",
        help="replace out-of-vocabulary inflections with [UNK] or drop them",
    )
    p.add_argument("--spell-max-distance", type=int, default=2)
    p.add_argument("--spell-max-suggestions", type=int, default=10)


def _add_scorer_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument(
        "--scorer",
        required=True,
        help="backend: ngram:<path> | external:cmd:<command> | external:tcp:<host>:<port>",
    )
    p.add_argument("--timeout", type=float, default=30.0, help="scorer response timeout (s)")


def _add_search_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--tau", type=_parse_tau, default=0.0, help="acceptance margin; 'off' disables edits")
    p.add_argument("--max-passes", type=int, default=1)
    p.add_argument("--jobs", type=int, default=1, help="parallel sentence correction")


def _add_eval_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--beta", type=float, default=0.5)
    p.add_argument("--max-unchanged", type=int, default=2, help="largest matched gap merged edits may span")
    p.add_argument("--ignore-case", action="store_true")


def build_parser() -> tuple[argparse.ArgumentParser, dict[str, argparse.ArgumentParser]]:
    parser = argparse.ArgumentParser(
        prog="lmgec",
        description="Unsupervised grammatical error correction by language-model rescoring.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {VERSION}")
    parser.add_argument("--config", help="INI config file; flags override it")
    subs = parser.add_subparsers(dest="command", metavar="COMMAND")
    table: dict[str, argparse.ArgumentParser] = {}

    def sub(name: str, func, help_text: str) -> argparse.ArgumentParser:
        p = subs.add_parser(name, help=help_text)
        p.set_defaults(func=func)
        p.add_argument("--config-dump", action="store_true", help="print effective config and exit")
        p.add_argument("--verbose", action="store_true", help="debug logging")
        table[name] = p
        return p

    p = sub("build-vocab", cmd_build_vocab, "count tokens into a vocabulary file")
    p.add_argument("corpus", help="tokenized text, one sentence per line ('-' for stdin)")
    p.add_argument("--min-count", type=int, default=1)
    p.add_argument("--out", default="-")

    p = sub("train-lm", cmd_train_lm, "train and save the n-gram model")
    p.add_argument("corpus", help="tokenized text, one sentence per line ('-' for stdin)")
    p.add_argument("--order", type=int, default=3)
    p.add_argument("--min-count", type=int, default=1)
    p.add_argument("--smoothing", choices=("kn", "mle"), default="kn")
    p.add_argument("--discount", type=float, default=0.75)
    p.add_argument("--out", required=True, help="model file to write")
    p.add_argument("--dump", help="also write a text dump of the counts")

    p = sub("correct", cmd_correct, "correct a corpus")
    p.add_argument("input", help="tokenized text or M2 file ('-' for stdin)")
    p.add_argument("--format", choices=("auto", "text", "m2"), default="auto")
    _add_resource_flags(p)
    _add_scorer_flags(p)
    _add_search_flags(p)
    p.add_argument("--out", default="-", help="corrected text, line-aligned with input")
    p.add_argument("--edit-log", help="JSON-lines log of applied edits with scores")

    p = sub("evaluate", cmd_evaluate, "score corrections against gold edits")
    p.add_argument("hypothesis", help="corrected text, one sentence per line")
    p.add_argument("gold", help="gold M2 file")
    _add_eval_flags(p)
    p.add_argument("--per-sentence", help="write per-sentence counts TSV here")

    p = sub("sweep-tau", cmd_sweep_tau, "grid-search the acceptance margin on a dev set")
    p.add_argument("dev", help="development M2 file")
    _add_resource_flags(p)
    _add_scorer_flags(p)
    p.add_argument("--taus", default="0,2,4,6,8", help="comma-separated margins; 'off' allowed")
    p.add_argument("--max-passes", type=int, default=1)
    p.add_argument("--jobs", type=int, default=1)
    _add_eval_flags(p)

    p = sub("score", cmd_score, "print sentence log-probabilities")
    p.add_argument("input", help="tokenized text, one sentence per line ('-' for stdin)")
    _add_scorer_flags(p)

    return parser, table


def _scan_config_path(argv: Sequence[str]) -> Optional[str]:
    for i, arg in enumerate(argv):
        if arg == "--config" and i + 1 < len(argv):
            return argv[i + 1]
        if arg.startswith("--config="):
            return arg.split("=", 1)[1]
    return None


def _apply_config_file(
    path: str, table: dict[str, argparse.ArgumentParser]
) -> None:
    cp = configparser.ConfigParser()
    with open(path, encoding="utf-8") as fh:
        cp.read_file(fh)
    for name, sp in table.items():
        actions = {a.dest: a for a in sp._actions}
        values: dict[str, object] = {}
        for section, strict in (("global", False), (name, True)):
            if not cp.has_section(section):
                continue
            for key, raw in cp.items(section):
                dest = key.replace("-", "_")
                action = actions.get(dest)
                if action is None:
                    if strict:
                        raise ValueError(f"unknown config key {key!r} in section [{section}]")
                    continue
                values[dest] = _convert_config_value(action, raw)
        if values:
            sp.set_defaults(**values)


def _convert_config_value(action: argparse.Action, raw: str):
    if isinstance(action, (argparse._StoreTrueAction, argparse._StoreFalseAction)):
        return _parse_bool(raw)
    if callable(action.type):
        try:
            return action.type(raw)
        except argparse.ArgumentTypeError as exc:
            raise ValueError(str(exc)) from exc
    return raw


def _dump_config(args: argparse.Namespace, sp: argparse.ArgumentParser) -> None:
    skip = {"func", "command", "config", "config_dump"}
    lines = [f"[{args.command}]"]
    for action in sp._actions:
        dest = action.dest
        if dest in skip or not action.option_strings:
            continue
        value = getattr(args, dest, None)
        if value is None:
            continue
        if isinstance(value, bool):
            text = "true" if value else "false"
        elif dest in ("tau",):
            text = _format_tau(value)
        else:
            text = str(value)
        lines.append(f"{dest.replace('_', '-')} = {text}")
    sys.stdout.write("\n".join(lines) + "\n")


def main(argv: Optional[Sequence[str]] = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser, table = build_parser()
    config_path = _scan_config_path(argv)
    if config_path:
        try:
            _apply_config_file(config_path, table)
        except (OSError, ValueError, configparser.Error) as exc:
            print(f"lmgec: config error: {exc}", file=sys.stderr)
            return 2
    args = parser.parse_args(argv)
    if not getattr(args, "command", None):
        parser.print_help(sys.stderr)
        return 2
    logging.basicConfig(
        stream=sys.stderr,
        level=logging.DEBUG if getattr(args, "verbose", False) else logging.INFO,
        format="%(levelname)s %(message)s",
    )
    if getattr(args, "config_dump", False):
        _dump_config(args, table[args.command])
        return 0
    try:
        return args.func(args)
    except ScorerUnavailableError as exc:
        log.error("scorer unavailable: %s", exc)
        return 3
    except ScorerError as exc:
        log.error("scorer failure: %s", exc)
        return 3
    except M2ParseError as exc:
        log.error("%s", exc)
        return 2
    except TrainingError as exc:
        log.error("%s", exc)
        return 2
    except (OSError, ValueError) as exc:
        log.error("%s", exc)
        return 2


if __name__ == "__main__":
    sys.exit(main())
