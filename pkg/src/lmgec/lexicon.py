"""Lexical resources feeding candidate generation: vocabulary with counts,
an inflection database (AGID text format), preposition/determiner
inventories, and an edit-distance spelling suggester.
"""

from __future__ import annotations

import re
from collections import Counter
from dataclasses import dataclass, field
from importlib import resources
from typing import IO, Iterable, Literal, Union

UNK = "[UNK]"

OOVPolicy = Literal["unk", "drop"]

_AGID_POS = frozenset("VNA")
_AGID_MARKERS = "?~!"
_BRACED = re.compile(r"\{[^}]*\}")


def _read_text(source: Union[str, bytes, IO]) -> str:
    if isinstance(source, bytes):
        return source.decode("utf-8")
    if isinstance(source, str):
        return source
    data = source.read()
    return data.decode("utf-8") if isinstance(data, bytes) else data


@dataclass
class Vocabulary:
    """Surface-form vocabulary with corpus counts.

    Membership is exact-match on the surface form; with
    ``case_sensitive=False`` both stored words and queries are lowercased.
    """

    frequency: dict[str, int] = field(default_factory=dict)
    case_sensitive: bool = True

    def _key(self, word: str) -> str:
        return word if self.case_sensitive else word.lower()

    def __contains__(self, word: str) -> bool:
        return self._key(word) in self.frequency

    def __len__(self) -> int:
        return len(self.frequency)

    def count(self, word: str) -> int:
        return self.frequency.get(self._key(word), 0)

    def words(self) -> Iterable[str]:
        return self.frequency.keys()


def build_vocab(
    tokens: Iterable[str], min_count: int = 1, case_sensitive: bool = True
) -> Vocabulary:
    """Count tokens and keep those occurring at least ``min_count`` times.

    The result iterates in (count desc, word asc) order, which is also the
    vocabulary file order.
    """
    if min_count < 1:
        raise ValueError(f"min_count must be >= 1, got {min_count}")
    counts: Counter[str] = Counter()
    for tok in tokens:
        counts[tok if case_sensitive else tok.lower()] += 1
    kept = sorted(
        ((w, c) for w, c in counts.items() if c >= min_count),
        key=lambda wc: (-wc[1], wc[0]),
    )
    return Vocabulary(dict(kept), case_sensitive)


def load_vocab(source: Union[str, bytes, IO], case_sensitive: bool = True) -> Vocabulary:
    """Read a ``<word> <count>`` per line vocabulary file."""
    frequency: dict[str, int] = {}
    for lineno, line in enumerate(_read_text(source).splitlines(), start=1):
        if not line.strip():
            continue
        parts = line.split()
        if len(parts) != 2:
            raise ValueError(f"vocab line {lineno}: expected '<word> <count>', got {line!r}")
        try:
            count = int(parts[1])
        except ValueError:
            raise ValueError(f"vocab line {lineno}: non-integer count {parts[1]!r}") from None
        if count < 1:
            raise ValueError(f"vocab line {lineno}: count must be >= 1")
        word = parts[0] if case_sensitive else parts[0].lower()
        frequency[word] = frequency.get(word, 0) + count
    return Vocabulary(frequency, case_sensitive)


def dump_vocab(vocab: Vocabulary) -> str:
    return "".join(f"{w} {c}\n" for w, c in vocab.frequency.items())


@dataclass(frozen=True)
class InflectionEntry:
    lemma: str
    pos: str
    forms: tuple[str, ...]  # lemma first, then file order, deduplicated


class InflectionDB:
    """Lemma/POS keyed inflection sets with a form -> entries reverse map."""

    def __init__(self) -> None:
        self.entries: list[InflectionEntry] = []
        self._by_form: dict[str, list[int]] = {}
        self.skipped_lines = 0

    def add_entry(self, lemma: str, pos: str, forms: Iterable[str]) -> None:
        all_forms: list[str] = []
        for f in (lemma, *forms):
            if f and f not in all_forms:
                all_forms.append(f)
        entry = InflectionEntry(lemma, pos, tuple(all_forms))
        idx = len(self.entries)
        self.entries.append(entry)
        for f in entry.forms:
            self._by_form.setdefault(f, []).append(idx)

    def __contains__(self, form: str) -> bool:
        return form in self._by_form

    def __len__(self) -> int:
        return len(self.entries)

    def entry_forms(self, form: str) -> tuple[str, ...]:
        """All forms sharing a lemma entry with ``form`` (itself included),
        in file order across entries; empty if the form is unknown."""
        out: list[str] = []
        for idx in self._by_form.get(form, ()):
            for f in self.entries[idx].forms:
                if f not in out:
                    out.append(f)
        return tuple(out)


def _parse_agid_forms(tail: str) -> list[str]:
    forms: list[str] = []
    for slot in tail.split(","):
        for variant in slot.split("|"):
            form = _BRACED.sub("", variant).strip().strip(_AGID_MARKERS).strip()
            if form:
                forms.append(form)
    return forms


def load_inflections(source: Union[str, bytes, IO]) -> InflectionDB:
    """Parse AGID-style ``<lemma> <POS>: <form>[, <form>...]`` lines.

    Variants inside a slot are separated by ``|``; the quality markers
    ``?``, ``~``, ``!`` and ``{...}`` annotations are stripped.  Only V/N/A
    entries are kept; malformed lines are skipped and counted in
    ``skipped_lines``.
    """
    db = InflectionDB()
    for line in _read_text(source).splitlines():
        line = line.strip()
        if not line:
            continue
        head, sep, tail = line.partition(":")
        parts = head.split()
        if not sep or len(parts) != 2:
            db.skipped_lines += 1
            continue
        lemma, pos = parts
        pos = pos.strip(_AGID_MARKERS)
        if pos not in _AGID_POS:
            db.skipped_lines += 1
            continue
        forms = _parse_agid_forms(tail)
        if not forms:
            db.skipped_lines += 1
            continue
        db.add_entry(lemma, pos, forms)
    return db


def forms_of(
    word: str,
    db: InflectionDB,
    vocab: Vocabulary,
    policy: OOVPolicy = "unk",
) -> list[str]:
    """Alternative inflections of ``word`` (the word itself excluded).

    Forms missing from the vocabulary are replaced by a single ``[UNK]``
    under ``policy="unk"`` or dropped under ``policy="drop"``.
    """
    if policy not in ("unk", "drop"):
        raise ValueError(f"unknown OOV policy {policy!r}")
    out: list[str] = []
    for form in db.entry_forms(word):
        if form == word:
            continue
        if form not in vocab:
            if policy == "drop":
                continue
            form = UNK
        if form not in out:
            out.append(form)
    return out


@dataclass(frozen=True)
class FunctionWordSets:
    """Preposition and determiner inventories, lowercase canonical forms.

    Inventory order is the file order; it fixes the candidate ordering
    downstream.  Entries may be multi-word (e.g. ``in front of``).
    """

    prepositions: tuple[str, ...]
    determiners: tuple[str, ...]

    def __post_init__(self) -> None:
        if not self.prepositions or not self.determiners:
            raise ValueError("function word inventories must be non-empty")

    def is_preposition(self, token: str) -> bool:
        return token.lower() in _as_set(self.prepositions)

    def is_determiner(self, token: str) -> bool:
        return token.lower() in _as_set(self.determiners)


_SET_CACHE: dict[tuple[str, ...], frozenset[str]] = {}


def _as_set(words: tuple[str, ...]) -> frozenset[str]:
    cached = _SET_CACHE.get(words)
    if cached is None:
        cached = frozenset(words)
        _SET_CACHE[words] = cached
    return cached


def load_word_list(source: Union[str, bytes, IO]) -> tuple[str, ...]:
    """One entry per line; blank lines and ``#`` comments ignored; lowercased."""
    out: list[str] = []
    for line in _read_text(source).splitlines():
        entry = line.strip().lower()
        if entry and not entry.startswith("#"):
            if entry not in out:
                out.append(entry)
    return tuple(out)


def default_function_words() -> FunctionWordSets:
    """The inventories shipped with the package."""
    preps = load_word_list(resources.files("lmgec.data").joinpath("prepositions.txt").read_text("utf-8"))
    dets = load_word_list(resources.files("lmgec.data").joinpath("determiners.txt").read_text("utf-8"))
    return FunctionWordSets(preps, dets)


def damerau_levenshtein(a: str, b: str, cutoff: int | None = None) -> int:
    """Restricted Damerau-Levenshtein distance (adjacent transpositions).

    With ``cutoff`` set, returns ``cutoff + 1`` as soon as the distance is
    known to exceed it.
    """
    la, lb = len(a), len(b)
    if cutoff is not None and abs(la - lb) > cutoff:
        return cutoff + 1
    prev2: list[int] | None = None
    prev = list(range(lb + 1))
    for i in range(1, la + 1):
        cur = [i] + [0] * lb
        ai = a[i - 1]
        for j in range(1, lb + 1):
            cost = 0 if ai == b[j - 1] else 1
            d = min(prev[j] + 1, cur[j - 1] + 1, prev[j - 1] + cost)
            if i > 1 and j > 1 and ai == b[j - 2] and a[i - 2] == b[j - 1]:
                assert prev2 is not None
                d = min(d, prev2[j - 2] + 1)
            cur[j] = d
        if cutoff is not None and min(cur) > cutoff:
            return cutoff + 1
        prev2, prev = prev, cur
    return prev[lb]


def spell_suggest(
    word: str,
    vocab: Vocabulary,
    max_distance: int = 2,
    max_suggestions: int = 10,
) -> list[str]:
    """Vocabulary words within edit distance ``max_distance`` of ``word``,
    ordered by (distance asc, corpus frequency desc, lexicographic asc).

    The caller must only pass alphabetic non-words; both preconditions are
    enforced.
    """
    if word in vocab:
        raise ValueError(f"spell_suggest called on in-vocabulary word {word!r}")
    if not word.isalpha():
        raise ValueError(f"spell_suggest called on non-alphabetic {word!r}")
    ranked: list[tuple[int, int, str]] = []
    for cand, freq in vocab.frequency.items():
        dist = damerau_levenshtein(word, cand, cutoff=max_distance)
        if dist <= max_distance:
            ranked.append((dist, -freq, cand))
    ranked.sort()
    return [cand for _, _, cand in ranked[:max_suggestions]]
