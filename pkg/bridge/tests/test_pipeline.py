"""The bridge as the external scorer behind the correction engine: the
whole loop runs over the wire, from candidate generation to applied edit."""

import sys

import pytest

from lmgec.confusion import CandidateConfig, Lexicon, generate_candidates
from lmgec.lexicon import FunctionWordSets, InflectionDB, build_vocab
from lmgec.scorer import open_scorer
from lmgec.search import correct_sentence
from lmgec.textcore import Sentence

from tinymodels import corpus

FIXTURE = "They all knows where the conference is and when .".split()
EXPECTED = "They all know where the conference is and when .".split()


@pytest.fixture(scope="module")
def bridge_scorer(causal_model_dir):
    spec = (
        f"external:cmd:{sys.executable} -m lmgec_bridge "
        f"--model {causal_model_dir} --mode causal"
    )
    scorer = open_scorer(spec, timeout=60.0)
    yield scorer
    scorer.close()


def smoke_lexicon():
    words = [w for text in corpus() for w in text.split()]
    inflections = InflectionDB()
    inflections.add_entry("know", "V", ("knows", "knew", "known", "knowing"))
    # inventories deliberately avoid the fixture's words so the only
    # candidate position is the morphological one
    return Lexicon(
        vocab=build_vocab(words, min_count=1),
        inflections=inflections,
        function_words=FunctionWordSets(("to", "for"), ("this", "that")),
    )


def test_margin_prefers_the_grammatical_sentence(bridge_scorer):
    scores = bridge_scorer.score_batch([EXPECTED, FIXTURE])
    assert scores[0] > scores[1]


def test_agreement_fixture_corrected_at_zero_margin(bridge_scorer):
    sentence = Sentence.from_surfaces(FIXTURE)
    candidates = generate_candidates(
        sentence, smoke_lexicon(), CandidateConfig(oov_policy="drop")
    )
    assert [c.start for c in candidates] == [2]
    result = correct_sentence(sentence, candidates, bridge_scorer, 0.0)
    assert result.corrected.surfaces == tuple(EXPECTED)
    edits = [(a.edit.start, a.edit.end, a.edit.replacement) for a in result.applied]
    assert edits == [(2, 3, "know")]
