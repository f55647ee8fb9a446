"""Seeded synthetic corpus for end-to-end tests.

Clean sentences come from collocation templates (every verb has a fixed
preposition, subjects agree with verbs), so a small n-gram model trained on
the clean text strongly prefers the original token at each corrupted site.
Corruptions are confusion-set errors with one gold edit per sentence, in
corrupted-sentence coordinates; insertions get an empty-string (deletion)
gold edit.
"""

import random
from collections import Counter

from lmgec import InflectionDB, Lexicon, build_vocab
from lmgec.lexicon import FunctionWordSets
from lmgec.textcore import Edit, GoldAnnotation, M2Entry, Sentence

NOUNS = [
    ("cat", "cats"),
    ("dog", "dogs"),
    ("bird", "birds"),
    ("house", "houses"),
    ("tree", "trees"),
    ("car", "cars"),
    ("book", "books"),
    ("road", "roads"),
    ("river", "rivers"),
    ("friend", "friends"),
    ("garden", "gardens"),
    ("teacher", "teachers"),
    ("student", "students"),
    ("city", "cities"),
    ("child", "children"),
]

# base, third person singular, past, gerund, collocated preposition
VERBS = [
    ("sit", "sits", "sat", "sitting", "on"),
    ("live", "lives", "lived", "living", "in"),
    ("look", "looks", "looked", "looking", "at"),
    ("walk", "walks", "walked", "walking", "to"),
    ("play", "plays", "played", "playing", "with"),
    ("come", "comes", "came", "coming", "from"),
    ("sleep", "sleeps", "slept", "sleeping", "near"),
    ("jump", "jumps", "jumped", "jumping", "over"),
    ("hide", "hides", "hid", "hiding", "under"),
    ("talk", "talks", "talked", "talking", "about"),
]

ADJECTIVES = [
    "big", "small", "old", "young", "quiet", "busy", "green", "red", "happy", "tall",
]

PREPOSITIONS = ("on", "in", "at", "to", "with", "from", "near", "over", "under", "about")
DETERMINERS = ("the", "a", "this", "that", "every", "some")

# the corpus is present tense throughout, so swapping base and third person
# forms always breaks subject agreement and the original stays recoverable
MORPH_ALTERNATIVES: dict[str, tuple[str, ...]] = {}
for _base, _third, _past, _ger, _prep in VERBS:
    MORPH_ALTERNATIVES[_base] = (_third,)
    MORPH_ALTERNATIVES[_third] = (_base,)

CATEGORIES = ("PREP", "DET", "MORPH")


def make_sentence(rng: random.Random) -> list[str]:
    subj_noun = rng.choice(NOUNS)
    obj_noun = rng.choice(NOUNS)
    base, third, _past, _gerund, prep = rng.choice(VERBS)
    plural = rng.random() < 0.4
    subj = subj_noun[1] if plural else subj_noun[0]
    verb = base if plural else third
    obj = obj_noun[1] if rng.random() < 0.3 else obj_noun[0]
    tokens = ["the", subj, verb, prep, "the", obj]
    if rng.random() < 0.3:
        tokens.insert(5, rng.choice(ADJECTIVES))
    return tokens


def generate_corpus(n_sentences: int, seed: int) -> list[list[str]]:
    rng = random.Random(seed)
    return [make_sentence(rng) for _ in range(n_sentences)]


def _swap_sites(tokens: list[str], inventory) -> list[int]:
    return [i for i, t in enumerate(tokens) if t in inventory]


def _insert_ok(tokens: list[str], index: int, word: str) -> bool:
    if index > 0 and tokens[index - 1] == word:
        return False
    if index < len(tokens) and tokens[index] == word:
        return False
    return True


def _corrupt_one(tokens: list[str], kind: str, rng: random.Random):
    """Damaged tokens and the gold edit restoring them, or None if the
    sentence has no site for this corruption kind."""
    if kind == "prep_swap" or kind == "det_swap":
        inventory = PREPOSITIONS if kind == "prep_swap" else DETERMINERS
        label = "PREP" if kind == "prep_swap" else "DET"
        sites = _swap_sites(tokens, inventory)
        if not sites:
            return None
        i = rng.choice(sites)
        wrong = rng.choice([w for w in inventory if w != tokens[i]])
        damaged = tokens[:i] + [wrong] + tokens[i + 1 :]
        return damaged, Edit(i, i + 1, tokens[i], label)
    if kind == "morph_swap":
        sites = [i for i, t in enumerate(tokens) if t in MORPH_ALTERNATIVES]
        if not sites:
            return None
        i = rng.choice(sites)
        wrong = rng.choice(MORPH_ALTERNATIVES[tokens[i]])
        damaged = tokens[:i] + [wrong] + tokens[i + 1 :]
        return damaged, Edit(i, i + 1, tokens[i], "MORPH")
    if kind == "prep_insert" or kind == "det_insert":
        inventory = PREPOSITIONS if kind == "prep_insert" else DETERMINERS
        label = "PREP" if kind == "prep_insert" else "DET"
        options = [
            (i, w)
            for i in range(len(tokens) + 1)
            for w in inventory
            if _insert_ok(tokens, i, w)
        ]
        if not options:
            return None
        i, word = rng.choice(options)
        damaged = tokens[:i] + [word] + tokens[i:]
        return damaged, Edit(i, i + 1, "", label)
    raise ValueError(f"unknown corruption kind {kind!r}")


KINDS = ("prep_swap", "det_swap", "morph_swap", "prep_insert", "det_insert")


def corrupt(
    sentences: list[list[str]], seed: int, rate: float = 0.35
) -> tuple[list[M2Entry], Counter]:
    """M2 entries over damaged copies of ``sentences``; clean sentences get
    a noop annotation.  Returns the entries and per-kind corruption counts."""
    rng = random.Random(seed)
    entries: list[M2Entry] = []
    stats: Counter = Counter()
    for tokens in sentences:
        result = None
        if rng.random() < rate:
            kinds = list(KINDS)
            rng.shuffle(kinds)
            for kind in kinds:
                result = _corrupt_one(tokens, kind, rng)
                if result is not None:
                    stats[kind] += 1
                    break
        if result is None:
            entry = M2Entry(
                Sentence.from_surfaces(tokens), (GoldAnnotation(0, ()),)
            )
            stats["clean"] += 1
        else:
            damaged, edit = result
            entry = M2Entry(
                Sentence.from_surfaces(damaged),
                (GoldAnnotation(0, (edit,)),),
            )
        entries.append(entry)
    return entries, stats


def build_lexicon(clean_sentences: list[list[str]]) -> Lexicon:
    tokens = [t for sent in clean_sentences for t in sent]
    vocab = build_vocab(tokens, min_count=1)
    inflections = InflectionDB()
    # verbs only: pluralizing a noun instead would also repair an agreement
    # break, and that ambiguity has no business in a regression fixture
    for base, third, past, gerund, _prep in VERBS:
        inflections.add_entry(base, "V", (third, past, gerund))
    words = FunctionWordSets(PREPOSITIONS, DETERMINERS)
    return Lexicon(vocab=vocab, inflections=inflections, function_words=words)
