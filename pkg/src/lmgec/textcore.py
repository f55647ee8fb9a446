"""Tokenized sentences, token-span edits, and M2 annotation file I/O.

All correction and evaluation code operates on whitespace-tokenized
sentences and token-offset edits (start inclusive, end exclusive).
Character offsets are never used.
"""

from __future__ import annotations

import string
from dataclasses import dataclass, field
from typing import IO, Iterable, Iterator, Union

_ASCII_PUNCT = frozenset(string.punctuation)


class SpanConflictError(ValueError):
    """Raised when edits overlap, are unsorted, or fall outside the sentence."""


class M2ParseError(ValueError):
    """Raised on malformed M2 input; carries the 1-based line number."""

    def __init__(self, lineno: int, message: str):
        super().__init__(f"line {lineno}: {message}")
        self.lineno = lineno


@dataclass(frozen=True)
class Token:
    surface: str
    index: int

    def __post_init__(self) -> None:
        if not self.surface or any(ch.isspace() for ch in self.surface):
            raise ValueError(f"token surface must be non-empty, whitespace-free: {self.surface!r}")
        if self.index < 0:
            raise ValueError(f"token index must be >= 0: {self.index}")


@dataclass(frozen=True)
class Sentence:
    tokens: tuple[Token, ...]

    @classmethod
    def from_surfaces(cls, surfaces: Iterable[str]) -> "Sentence":
        return cls(tuple(Token(s, i) for i, s in enumerate(surfaces)))

    @property
    def surfaces(self) -> tuple[str, ...]:
        return tuple(t.surface for t in self.tokens)

    @property
    def text(self) -> str:
        """Space-joined surface string (the inverse of whitespace tokenization)."""
        return " ".join(t.surface for t in self.tokens)

    def __len__(self) -> int:
        return len(self.tokens)

    def __iter__(self) -> Iterator[Token]:
        return iter(self.tokens)

    def __getitem__(self, i: int) -> Token:
        return self.tokens[i]


@dataclass(frozen=True)
class Edit:
    """Replace source tokens [start, end) with the tokens of `replacement`.

    `start == end` is a pure insertion; an empty replacement deletes the
    span.  `type_label` is carried for reporting only; evaluation matches
    edits by signature(), which ignores it.
    """

    start: int
    end: int
    replacement: str
    type_label: str = ""

    def __post_init__(self) -> None:
        if self.start < 0 or self.end < self.start:
            raise ValueError(f"bad edit span [{self.start}, {self.end})")

    def replacement_tokens(self) -> tuple[str, ...]:
        return tuple(self.replacement.split())

    def signature(self) -> tuple[int, int, str]:
        """Span plus whitespace-normalized replacement; the matching key."""
        return (self.start, self.end, " ".join(self.replacement.split()))


@dataclass(frozen=True)
class GoldAnnotation:
    """One annotator's edit set for a sentence.  Empty edits == noop."""

    annotator_id: int
    edits: tuple[Edit, ...] = field(default_factory=tuple)

    def __post_init__(self) -> None:
        prev: Edit | None = None
        for e in self.edits:
            if prev is not None and e.start < prev.end:
                raise ValueError(
                    f"annotator {self.annotator_id}: edits overlap or are unsorted "
                    f"([{prev.start},{prev.end}) then [{e.start},{e.end}))"
                )
            prev = e


@dataclass(frozen=True)
class M2Entry:
    sentence: Sentence
    annotations: tuple[GoldAnnotation, ...]


def tokenize(text: str) -> Sentence:
    """Split on whitespace, then peel leading/trailing ASCII punctuation
    into separate tokens.  Deterministic; empty input yields an empty
    sentence.  Internal punctuation (hyphens, apostrophes) is kept."""
    surfaces: list[str] = []
    for chunk in text.split():
        lead: list[str] = []
        trail: list[str] = []
        while len(chunk) > 1 and chunk[0] in _ASCII_PUNCT:
            lead.append(chunk[0])
            chunk = chunk[1:]
        while len(chunk) > 1 and chunk[-1] in _ASCII_PUNCT:
            trail.append(chunk[-1])
            chunk = chunk[:-1]
        surfaces.extend(lead)
        surfaces.append(chunk)
        surfaces.extend(reversed(trail))
    return Sentence.from_surfaces(surfaces)


def detokenize(sentence: Sentence) -> str:
    return sentence.text


def _check_edits(sentence: Sentence, edits: list[Edit] | tuple[Edit, ...]) -> None:
    n = len(sentence)
    prev_end = 0
    prev: Edit | None = None
    for e in edits:
        if e.start < 0 or e.end > n:
            raise SpanConflictError(f"edit [{e.start},{e.end}) outside sentence of length {n}")
        if prev is not None and e.start < prev_end:
            raise SpanConflictError(
                f"edits out of order or overlapping: [{prev.start},{prev.end}) then [{e.start},{e.end})"
            )
        prev_end = e.end
        prev = e


def apply_edits(sentence: Sentence, edits: list[Edit] | tuple[Edit, ...]) -> Sentence:
    """Apply non-overlapping, start-sorted edits and return a new sentence.

    Replacements are applied right-to-left so earlier offsets stay valid.
    Insertions sharing an offset land in listed order.  The input sentence
    is never modified.
    """
    _check_edits(sentence, edits)
    surfaces = list(sentence.surfaces)
    for e in reversed(edits):
        surfaces[e.start:e.end] = e.replacement_tokens()
    return Sentence.from_surfaces(surfaces)


_NOOP_TYPE = "noop"
_M2_EMPTY = "-NONE-"


def _iter_lines(source: Union[str, bytes, IO]) -> Iterator[str]:
    if isinstance(source, bytes):
        text = source.decode("utf-8")
    elif isinstance(source, str):
        text = source
    else:
        data = source.read()
        text = data.decode("utf-8") if isinstance(data, bytes) else data
    yield from text.splitlines()


class _BlockState:
    """Accumulates one S-block while parsing."""

    def __init__(self, sentence: Sentence, lineno: int):
        self.sentence = sentence
        self.lineno = lineno
        self.order: list[int] = []            # annotator ids, first-seen order
        self.edits: dict[int, list[Edit]] = {}
        self.noops: set[int] = set()

    def add_noop(self, annotator: int, lineno: int) -> None:
        if annotator in self.noops or annotator in self.edits:
            raise M2ParseError(lineno, f"duplicate noop for annotator {annotator}")
        self.noops.add(annotator)
        self.order.append(annotator)

    def add_edit(self, annotator: int, edit: Edit, lineno: int) -> None:
        if annotator in self.noops:
            raise M2ParseError(lineno, f"annotator {annotator} was declared noop")
        if annotator not in self.edits:
            self.edits[annotator] = []
            self.order.append(annotator)
        else:
            prev = self.edits[annotator][-1]
            if edit.start < prev.end:
                raise M2ParseError(
                    lineno,
                    f"annotator {annotator}: edit [{edit.start},{edit.end}) overlaps "
                    f"or precedes [{prev.start},{prev.end})",
                )
        self.edits[annotator].append(edit)

    def finish(self) -> M2Entry:
        annotations = tuple(
            GoldAnnotation(a, tuple(self.edits.get(a, ()))) for a in self.order
        )
        return M2Entry(self.sentence, annotations)


def parse_m2(source: Union[str, bytes, IO]) -> list[M2Entry]:
    """Parse M2-format text into (sentence, annotations-per-annotator) entries.

    Format, per block: one ``S <tok> <tok> ...`` line followed by zero or
    more ``A <start> <end>|||<type>|||<replacement>|||REQUIRED|||-NONE-|||<annotator>``
    lines; blocks separated by a blank line.  ``A -1 -1|||noop|||...`` records
    an annotator with zero edits; a ``-NONE-`` replacement means deletion.
    Malformed lines raise M2ParseError with their line number.
    """
    entries: list[M2Entry] = []
    block: _BlockState | None = None

    def flush() -> None:
        nonlocal block
        if block is not None:
            entries.append(block.finish())
            block = None

    for lineno, line in enumerate(_iter_lines(source), start=1):
        line = line.rstrip("\r")
        if not line.strip():
            flush()
            continue
        if line == "S" or line.startswith("S "):
            flush()
            sentence = Sentence.from_surfaces(line[2:].split())
            block = _BlockState(sentence, lineno)
        elif line.startswith("A "):
            if block is None:
                raise M2ParseError(lineno, "annotation before any S line")
            fields = line[2:].split("|||")
            if len(fields) != 6:
                raise M2ParseError(lineno, f"expected 6 |||-separated fields, got {len(fields)}")
            span = fields[0].split()
            if len(span) != 2:
                raise M2ParseError(lineno, f"expected 'start end' offsets, got {fields[0]!r}")
            try:
                start, end = int(span[0]), int(span[1])
            except ValueError:
                raise M2ParseError(lineno, f"non-integer offsets {fields[0]!r}") from None
            try:
                annotator = int(fields[5])
            except ValueError:
                raise M2ParseError(lineno, f"non-integer annotator id {fields[5]!r}") from None
            if start == -1 and end == -1:
                block.add_noop(annotator, lineno)
                continue
            if end < start:
                raise M2ParseError(lineno, f"end < start in span [{start},{end})")
            if start < 0 or end > len(block.sentence):
                raise M2ParseError(
                    lineno,
                    f"span [{start},{end}) outside sentence of length {len(block.sentence)}",
                )
            replacement = "" if fields[2] == _M2_EMPTY else fields[2]
            block.add_edit(annotator, Edit(start, end, replacement, fields[1]), lineno)
        else:
            raise M2ParseError(lineno, f"unrecognized line {line!r}")
    flush()
    return entries


def write_m2(entries: Iterable[M2Entry]) -> str:
    """Render entries back to M2 text; inverse of parse_m2 on its output."""
    blocks: list[str] = []
    for entry in entries:
        lines = ["S " + entry.sentence.text if len(entry.sentence) else "S"]
        for ann in entry.annotations:
            if not ann.edits:
                lines.append(
                    f"A -1 -1|||{_NOOP_TYPE}|||{_M2_EMPTY}|||REQUIRED|||-NONE-|||{ann.annotator_id}"
                )
                continue
            for e in ann.edits:
                repl = e.replacement if e.replacement else _M2_EMPTY
                lines.append(
                    f"A {e.start} {e.end}|||{e.type_label}|||{repl}|||REQUIRED|||-NONE-|||{ann.annotator_id}"
                )
        blocks.append("\n".join(lines))
    return "\n\n".join(blocks) + "\n" if blocks else ""
