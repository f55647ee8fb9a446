import itertools
from functools import lru_cache

import pytest
from hypothesis import given
from hypothesis import strategies as st

from lmgec.lexicon import (
    UNK,
    FunctionWordSets,
    InflectionDB,
    Vocabulary,
    build_vocab,
    damerau_levenshtein,
    default_function_words,
    dump_vocab,
    forms_of,
    load_inflections,
    load_vocab,
    load_word_list,
    spell_suggest,
)


# -- independent oracles --------------------------------------------------


def count_oracle(tokens):
    """Sort-and-group counting, independent of collections.Counter."""
    counts = {}
    for tok, group in itertools.groupby(sorted(tokens)):
        counts[tok] = sum(1 for _ in group)
    return counts


def dl_oracle(a: str, b: str) -> int:
    """Plain recursive restricted Damerau-Levenshtein definition."""

    @lru_cache(maxsize=None)
    def d(i: int, j: int) -> int:
        if i == 0:
            return j
        if j == 0:
            return i
        best = min(
            d(i - 1, j) + 1,
            d(i, j - 1) + 1,
            d(i - 1, j - 1) + (0 if a[i - 1] == b[j - 1] else 1),
        )
        if i > 1 and j > 1 and a[i - 1] == b[j - 2] and a[i - 2] == b[j - 1]:
            best = min(best, d(i - 2, j - 2) + 1)
        return best

    return d(len(a), len(b))


short = st.text(alphabet="abc", max_size=6)


class TestBuildVocab:
    def test_counts_and_ordering(self):
        vocab = build_vocab("b a b c b a".split())
        assert list(vocab.frequency.items()) == [("b", 3), ("a", 2), ("c", 1)]

    def test_min_count_filters(self):
        vocab = build_vocab("b a b c b a".split(), min_count=2)
        assert set(vocab.words()) == {"a", "b"}

    def test_min_count_validation(self):
        with pytest.raises(ValueError):
            build_vocab(["a"], min_count=0)

    def test_case_insensitive(self):
        vocab = build_vocab(["The", "the", "THE"], case_sensitive=False)
        assert vocab.count("tHe") == 3
        assert "THE" in vocab

    def test_empty(self):
        assert len(build_vocab([])) == 0

    @given(st.lists(short.filter(bool), max_size=50))
    def test_matches_count_oracle(self, tokens):
        vocab = build_vocab(tokens)
        assert dict(vocab.frequency) == count_oracle(tokens)


class TestVocabularyIO:
    def test_round_trip(self):
        vocab = build_vocab("b a b c b a".split())
        assert load_vocab(dump_vocab(vocab)).frequency == vocab.frequency

    def test_load_rejects_bad_lines(self):
        with pytest.raises(ValueError):
            load_vocab("word\n")
        with pytest.raises(ValueError):
            load_vocab("word x\n")
        with pytest.raises(ValueError):
            load_vocab("word 0\n")

    def test_load_merges_duplicates(self):
        assert load_vocab("a 2\na 3\n").count("a") == 5

    def test_blank_lines_ignored(self):
        assert len(load_vocab("a 1\n\n\nb 2\n")) == 2


AGID_FIXTURE = """\
know V: knew, known, knowing, knows
abide V: abode | abided, abidden | abided, abiding, abides
cat N: cats
good A: better, best
sing V?: sang, sung, singing, sings
dream V: dreamt {dreamed}, dreamt {dreamed}, dreaming, dreams
weird X: foo
no colon here
too many head words Q: x
"""


class TestLoadInflections:
    def test_parses_fixture(self):
        db = load_inflections(AGID_FIXTURE)
        assert db.skipped_lines == 3
        assert db.entry_forms("know") == ("know", "knew", "known", "knowing", "knows")
        assert db.entry_forms("knows") == ("know", "knew", "known", "knowing", "knows")

    def test_variant_bars_and_braces(self):
        db = load_inflections(AGID_FIXTURE)
        forms = db.entry_forms("abide")
        assert "abode" in forms and "abided" in forms and "abidden" in forms
        assert db.entry_forms("dream") == ("dream", "dreamt", "dreaming", "dreams")

    def test_pos_markers_stripped(self):
        db = load_inflections(AGID_FIXTURE)
        assert "sang" in db.entry_forms("sing")

    def test_unknown_form(self):
        db = load_inflections(AGID_FIXTURE)
        assert db.entry_forms("unknownword") == ()
        assert "cat" in db and "unknownword" not in db

    def test_noun_and_adjective_entries(self):
        db = load_inflections(AGID_FIXTURE)
        assert db.entry_forms("cats") == ("cat", "cats")
        assert db.entry_forms("good") == ("good", "better", "best")


class TestFormsOf:
    def fixture(self):
        db = load_inflections("know V: knew, known, knowing, knows\n")
        vocab = Vocabulary({"know": 5, "knows": 3, "knew": 2})
        return db, vocab

    def test_excludes_word_itself(self):
        db, vocab = self.fixture()
        assert "knows" not in forms_of("knows", db, vocab)

    def test_unk_policy_collapses_oov(self):
        db, vocab = self.fixture()
        forms = forms_of("knows", db, vocab, policy="unk")
        assert forms == ["know", "knew", UNK]

    def test_drop_policy_removes_oov(self):
        db, vocab = self.fixture()
        assert forms_of("knows", db, vocab, policy="drop") == ["know", "knew"]

    def test_bad_policy(self):
        db, vocab = self.fixture()
        with pytest.raises(ValueError):
            forms_of("knows", db, vocab, policy="nope")

    def test_no_entry_gives_empty(self):
        db, vocab = self.fixture()
        assert forms_of("table", db, vocab) == []


class TestFunctionWords:
    def test_membership_case_insensitive(self):
        fw = FunctionWordSets(("on", "in"), ("the", "a"))
        assert fw.is_preposition("On") and fw.is_preposition("IN")
        assert fw.is_determiner("The")
        assert not fw.is_preposition("the")

    def test_rejects_empty(self):
        with pytest.raises(ValueError):
            FunctionWordSets((), ("the",))

    def test_load_word_list(self):
        text = "# comment\nOn\n\nin\non\n"
        assert load_word_list(text) == ("on", "in")

    def test_default_inventories(self):
        fw = default_function_words()
        for prep in ("on", "in", "about", "from", "by", "with"):
            assert fw.is_preposition(prep)
        for det in ("the", "a", "an", "this", "their"):
            assert fw.is_determiner(det)
        assert len(fw.prepositions) >= 40
        assert len(fw.determiners) >= 20


class TestDamerauLevenshtein:
    @pytest.mark.parametrize(
        "a,b,expected",
        [
            ("", "", 0),
            ("a", "", 1),
            ("", "abc", 3),
            ("kitten", "sitting", 3),
            ("ab", "ba", 1),
            ("abc", "abc", 0),
            ("teh", "the", 1),
            ("ca", "abc", 3),
        ],
    )
    def test_known_values(self, a, b, expected):
        assert damerau_levenshtein(a, b) == expected

    @given(short, short)
    def test_matches_recursive_oracle(self, a, b):
        assert damerau_levenshtein(a, b) == dl_oracle(a, b)

    @given(short, short)
    def test_symmetric(self, a, b):
        assert damerau_levenshtein(a, b) == damerau_levenshtein(b, a)

    @given(short, short, st.integers(0, 3))
    def test_cutoff_consistent(self, a, b, cutoff):
        truth = dl_oracle(a, b)
        got = damerau_levenshtein(a, b, cutoff=cutoff)
        if truth <= cutoff:
            assert got == truth
        else:
            assert got == cutoff + 1


class TestSpellSuggest:
    def vocab(self):
        return Vocabulary(
            {"the": 100, "then": 40, "they": 60, "she": 30, "tea": 30, "zebra": 5}
        )

    def test_ranked_by_distance_then_frequency_then_word(self):
        # teh->the and teh->tea are both distance 1; ties go to frequency.
        got = spell_suggest("teh", self.vocab())
        assert got == ["the", "tea", "they", "then", "she"]

    def test_max_distance(self):
        assert spell_suggest("teh", self.vocab(), max_distance=1) == ["the", "tea"]

    def test_max_suggestions(self):
        assert len(spell_suggest("teh", self.vocab(), max_suggestions=2)) == 2

    def test_no_matches(self):
        assert spell_suggest("qqqqqqq", self.vocab()) == []

    def test_rejects_in_vocab_word(self):
        with pytest.raises(ValueError):
            spell_suggest("the", self.vocab())

    def test_rejects_non_alphabetic(self):
        with pytest.raises(ValueError):
            spell_suggest("x7", self.vocab())
