"""Per-token substitution candidates for the correction search.

Each token gets at most one candidate set, chosen by category priority:
preposition > determiner > morphology > spelling.  Spans always cover
exactly one token; the empty-string alternative means deletion.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .lexicon import (
    FunctionWordSets,
    InflectionDB,
    OOVPolicy,
    Vocabulary,
    default_function_words,
    forms_of,
    spell_suggest,
)
from .textcore import Sentence

PREP = "PREP"
DET = "DET"
MORPH = "MORPH"
SPELL = "SPELL"

CATEGORIES = (PREP, DET, MORPH, SPELL)


@dataclass(frozen=True)
class CandidateSet:
    """Alternatives for the single token at [start, end); '' deletes it."""

    start: int
    end: int
    category: str
    alternatives: tuple[str, ...]

    def __post_init__(self):
        if self.category not in CATEGORIES:
            raise ValueError(f"unknown category {self.category!r}")
        if self.end != self.start + 1:
            raise ValueError("candidate span must cover exactly one token")
        if not self.alternatives:
            raise ValueError("candidate set must offer at least one alternative")
        if len(set(self.alternatives)) != len(self.alternatives):
            raise ValueError("duplicate alternatives")
        if "" in self.alternatives and self.category not in (PREP, DET):
            raise ValueError("deletion is only offered for function words")


@dataclass(frozen=True)
class CandidateConfig:
    oov_policy: OOVPolicy = "unk"
    spell_max_distance: int = 2
    spell_max_suggestions: int = 10


@dataclass(frozen=True)
class Lexicon:
    """Resources the generator consults; immutable for the run."""

    vocab: Vocabulary
    inflections: InflectionDB
    function_words: FunctionWordSets = field(default_factory=default_function_words)


def _function_word_set(
    surface: str, inventory: tuple[str, ...]
) -> tuple[str, ...]:
    lowered = surface.lower()
    alts = [w for w in inventory if w != lowered]
    alts.append("")
    return tuple(alts)


def generate_candidates(
    sentence: Sentence,
    lex: Lexicon,
    config: CandidateConfig | None = None,
) -> list[CandidateSet]:
    """One pass over the sentence, in token order.

    Function-word alternatives keep inventory file order with deletion
    last; morphology keeps inflection-table order; spelling keeps
    suggester ranking.  A capitalized sentence-initial token is tested
    against the vocabulary in lowercase before it counts as a non-word.
    """
    cfg = config or CandidateConfig()
    words = lex.function_words
    out: list[CandidateSet] = []
    for i, token in enumerate(sentence):
        surface = token.surface
        if words.is_preposition(surface):
            out.append(CandidateSet(i, i + 1, PREP, _function_word_set(surface, words.prepositions)))
            continue
        if words.is_determiner(surface):
            out.append(CandidateSet(i, i + 1, DET, _function_word_set(surface, words.determiners)))
            continue
        if surface in lex.vocab:
            forms = forms_of(surface, lex.inflections, lex.vocab, cfg.oov_policy)
            if forms:
                out.append(CandidateSet(i, i + 1, MORPH, tuple(forms)))
            continue
        if not surface.isalpha():
            continue
        if i == 0 and surface[0].isupper() and surface.lower() in lex.vocab:
            continue
        suggestions = spell_suggest(
            surface,
            lex.vocab,
            max_distance=cfg.spell_max_distance,
            max_suggestions=cfg.spell_max_suggestions,
        )
        if suggestions:
            out.append(CandidateSet(i, i + 1, SPELL, tuple(suggestions)))
    return out
