"""Unsupervised grammatical error correction by language-model rescoring."""

from .confusion import CandidateConfig, CandidateSet, Lexicon, generate_candidates
from .evalm2 import (
    EditLattice,
    EvalCounts,
    EvalReport,
    SweepResult,
    evaluate_corpus,
    extract_lattice,
    f_beta,
    maxmatch_select,
    sweep_tau,
)
from .external import ExternalScorer, ScoreResponseError, ScorerError, ScorerUnavailableError
from .lexicon import (
    InflectionDB,
    Vocabulary,
    build_vocab,
    damerau_levenshtein,
    forms_of,
    load_inflections,
    load_vocab,
    spell_suggest,
)
from .ngram import NGramModel, train_ngram
from .scorer import NGramScorer, Scorer, open_scorer
from .search import (
    TAU_OFF,
    AppliedEdit,
    CorpusReport,
    CorrectionResult,
    correct_corpus,
    correct_sentence,
)
from .textcore import (
    Edit,
    GoldAnnotation,
    M2Entry,
    M2ParseError,
    Sentence,
    Token,
    apply_edits,
    detokenize,
    parse_m2,
    tokenize,
    write_m2,
)

__all__ = [
    "AppliedEdit",
    "CandidateConfig",
    "CandidateSet",
    "CorpusReport",
    "CorrectionResult",
    "Edit",
    "EditLattice",
    "EvalCounts",
    "EvalReport",
    "ExternalScorer",
    "GoldAnnotation",
    "InflectionDB",
    "Lexicon",
    "M2Entry",
    "M2ParseError",
    "NGramModel",
    "NGramScorer",
    "Scorer",
    "ScoreResponseError",
    "ScorerError",
    "ScorerUnavailableError",
    "Sentence",
    "SweepResult",
    "TAU_OFF",
    "Token",
    "Vocabulary",
    "apply_edits",
    "build_vocab",
    "correct_corpus",
    "correct_sentence",
    "damerau_levenshtein",
    "detokenize",
    "evaluate_corpus",
    "extract_lattice",
    "f_beta",
    "forms_of",
    "generate_candidates",
    "load_inflections",
    "load_vocab",
    "maxmatch_select",
    "open_scorer",
    "parse_m2",
    "spell_suggest",
    "sweep_tau",
    "tokenize",
    "train_ngram",
    "write_m2",
]
