"""Trainable n-gram language model with interpolated Kneser-Ney smoothing.

Scores are natural-log sentence probabilities including the end-of-sentence
transition.  Out-of-vocabulary tokens map to ``[UNK]``.  A maximum-likelihood
debug mode (no smoothing, no backoff) exists for hand-checkable tests.
"""

from __future__ import annotations

import math
import struct
from typing import Iterable, Sequence, Union

from .lexicon import UNK

BOS = "<s>"
EOS = "</s>"
_RESERVED = (UNK, BOS, EOS)

_MAGIC = b"LMGC"
_VERSION = 1
_MODES = ("kn", "mle")

_CACHE_LIMIT = 1 << 21


class TrainingError(ValueError):
    """Raised when a model cannot be trained from the given corpus."""


class ModelFormatError(ValueError):
    """Raised when a model file is corrupt or has an unknown version."""


TokenSeq = Sequence[str]


def _surfaces(sentence) -> tuple[str, ...]:
    if hasattr(sentence, "surfaces"):
        return tuple(sentence.surfaces)
    return tuple(sentence)


class NGramModel:
    """Immutable after construction; concurrent ``score`` calls are safe.

    ``raw_counts[k]`` holds raw k-gram counts over padded sentences; the
    smoothing tables (continuation counts for the lower orders) are derived
    deterministically from them.
    """

    def __init__(
        self,
        order: int,
        vocab: Sequence[str],
        raw_counts: dict[int, dict[tuple[str, ...], int]],
        smoothing: str = "kn",
        discount: float = 0.75,
    ):
        if not 1 <= order <= 5:
            raise ValueError(f"order must be in [1, 5], got {order}")
        if smoothing not in _MODES:
            raise ValueError(f"unknown smoothing mode {smoothing!r}")
        if not 0.0 < discount < 1.0:
            raise ValueError(f"discount must be in (0, 1), got {discount}")
        self.order = order
        self.smoothing = smoothing
        self.discount = discount
        self.vocab: tuple[str, ...] = tuple(vocab)
        vocab_set = set(self.vocab)
        for tok in _RESERVED:
            if tok not in vocab_set:
                raise ValueError(f"vocabulary must contain reserved token {tok}")
        self.raw_counts = raw_counts
        self._vocab_set = vocab_set
        # Tokens the model can predict; <s> is context-only.
        self._predictable: tuple[str, ...] = tuple(w for w in self.vocab if w != BOS)
        self._build_tables()
        self._cache: dict[tuple, float] = {}

    # -- derived tables ------------------------------------------------

    def _build_tables(self) -> None:
        n = self.order
        # levels[k]: context tuple (k-1 tokens) -> (total, {word: count})
        self._levels: dict[int, dict[tuple[str, ...], tuple[int, dict[str, int]]]] = {}

        def group(grams: Iterable[tuple[tuple[str, ...], int]]) -> dict:
            table: dict[tuple[str, ...], tuple[int, dict[str, int]]] = {}
            acc: dict[tuple[str, ...], dict[str, int]] = {}
            for gram, count in grams:
                ctx, w = gram[:-1], gram[-1]
                bucket = acc.setdefault(ctx, {})
                bucket[w] = bucket.get(w, 0) + count
            for ctx, counts in acc.items():
                table[ctx] = (sum(counts.values()), counts)
            return table

        self._levels[n] = group(
            (g, c) for g, c in self.raw_counts.get(n, {}).items() if g[-1] != BOS
        )
        for k in range(n - 1, 0, -1):
            # Continuation counts: one per distinct left extension of the k-gram.
            higher = self.raw_counts.get(k + 1, {})
            cont: dict[tuple[str, ...], int] = {}
            for gram in higher:
                if gram[-1] == BOS:
                    continue
                cont[gram[1:]] = cont.get(gram[1:], 0) + 1
            self._levels[k] = group(cont.items())

        level1 = self._levels[1].get((), (0, {}))
        self._level1_total, self._level1_counts = level1
        self._uniform = 1.0 / len(self._predictable)

    # -- probabilities ---------------------------------------------------

    def _norm(self, token: str) -> str:
        if token in (BOS, EOS):
            return UNK
        return token if token in self._vocab_set else UNK

    def cond_prob(self, context: Sequence[str], word: str) -> float:
        """P(word | context); context is truncated to the last order-1 tokens
        and padded with <s> if shorter.  OOV tokens map to [UNK]; <s> is
        legitimate in context position (matching the scoring padding) but
        never as the predicted word."""
        n = self.order
        ctx = tuple(t if t == BOS else self._norm(t) for t in context)
        if len(ctx) >= n - 1:
            ctx = ctx[len(ctx) - (n - 1):] if n > 1 else ()
        else:
            ctx = (BOS,) * (n - 1 - len(ctx)) + ctx
        w = word if word == EOS else self._norm(word)
        return self._p(n, ctx, w)

    def _p(self, k: int, ctx: tuple[str, ...], w: str) -> float:
        key = (ctx, w)
        cached = self._cache.get(key) if k == self.order else None
        if cached is not None:
            return cached
        p = self._p_uncached(k, ctx, w)
        if k == self.order:
            if len(self._cache) >= _CACHE_LIMIT:
                self._cache.clear()
            self._cache[key] = p
        return p

    def _p_uncached(self, k: int, ctx: tuple[str, ...], w: str) -> float:
        if self.smoothing == "mle":
            stats = self._levels[self.order].get(ctx)
            if stats is None:
                return 0.0
            total, counts = stats
            return counts.get(w, 0) / total
        D = self.discount
        if k == 1:
            total, counts = self._level1_total, self._level1_counts
            if total == 0:
                return self._uniform
            c = counts.get(w, 0)
            return (max(c - D, 0.0) + D * len(counts) * self._uniform) / total
        stats = self._levels[k].get(ctx)
        if stats is None:
            return self._p(k - 1, ctx[1:], w)
        total, counts = stats
        lower = self._p(k - 1, ctx[1:], w)
        return (max(counts.get(w, 0) - D, 0.0) + D * len(counts) * lower) / total

    def token_logprobs(self, sentence: Union[TokenSeq, object]) -> list[float]:
        """Natural-log conditionals for every token plus the final </s>."""
        n = self.order
        toks = [self._norm(t) for t in _surfaces(sentence)]
        padded = [BOS] * (n - 1) + toks + [EOS]
        out: list[float] = []
        for i in range(n - 1, len(padded)):
            ctx = tuple(padded[i - n + 1:i])
            p = self._p(n, ctx, padded[i])
            out.append(math.log(p) if p > 0.0 else float("-inf"))
        return out

    def score(self, sentence: Union[TokenSeq, object]) -> float:
        """Natural-log probability of the sentence, </s> transition included."""
        return sum(self.token_logprobs(sentence))

    def predictable_vocab(self) -> tuple[str, ...]:
        return self._predictable

    # -- serialization ---------------------------------------------------

    def to_bytes(self) -> bytes:
        ids = {w: i for i, w in enumerate(self.vocab)}
        parts: list[bytes] = [
            _MAGIC,
            struct.pack("<HBBd", _VERSION, _MODES.index(self.smoothing), self.order, self.discount),
            struct.pack("<I", len(self.vocab)),
        ]
        for w in self.vocab:
            enc = w.encode("utf-8")
            parts.append(struct.pack("<I", len(enc)))
            parts.append(enc)
        for k in range(1, self.order + 1):
            table = self.raw_counts.get(k, {})
            entries = sorted((tuple(ids[t] for t in g), c) for g, c in table.items())
            parts.append(struct.pack("<Q", len(entries)))
            for gram_ids, count in entries:
                parts.append(struct.pack(f"<{k}IQ", *gram_ids, count))
        return b"".join(parts)

    @classmethod
    def from_bytes(cls, blob: bytes) -> "NGramModel":
        view = memoryview(blob)
        if bytes(view[:4]) != _MAGIC:
            raise ModelFormatError("bad magic bytes")
        offset = 4

        def take(fmt: str):
            nonlocal offset
            size = struct.calcsize(fmt)
            if offset + size > len(view):
                raise ModelFormatError("truncated model file")
            vals = struct.unpack_from(fmt, view, offset)
            offset += size
            return vals

        version, mode_idx, order, discount = take("<HBBd")
        if version != _VERSION:
            raise ModelFormatError(f"unsupported version {version}")
        if mode_idx >= len(_MODES):
            raise ModelFormatError(f"unknown smoothing mode id {mode_idx}")
        (vocab_size,) = take("<I")
        vocab: list[str] = []
        for _ in range(vocab_size):
            (length,) = take("<I")
            if offset + length > len(view):
                raise ModelFormatError("truncated vocab entry")
            vocab.append(bytes(view[offset:offset + length]).decode("utf-8"))
            offset += length
        raw_counts: dict[int, dict[tuple[str, ...], int]] = {}
        for k in range(1, order + 1):
            (n_entries,) = take("<Q")
            table: dict[tuple[str, ...], int] = {}
            for _ in range(n_entries):
                vals = take(f"<{k}IQ")
                gram_ids, count = vals[:-1], vals[-1]
                try:
                    gram = tuple(vocab[i] for i in gram_ids)
                except IndexError:
                    raise ModelFormatError("token id out of range") from None
                table[gram] = count
            raw_counts[k] = table
        if offset != len(view):
            raise ModelFormatError("trailing bytes after model data")
        return cls(order, vocab, raw_counts, _MODES[mode_idx], discount)

    def save(self, path) -> None:
        with open(path, "wb") as fh:
            fh.write(self.to_bytes())

    @classmethod
    def load(cls, path) -> "NGramModel":
        with open(path, "rb") as fh:
            return cls.from_bytes(fh.read())

    def dump_text(self) -> str:
        """Human-readable dump of parameters and raw counts (debug aid)."""
        lines = [
            f"lmgc text dump v{_VERSION}",
            f"order\t{self.order}",
            f"smoothing\t{self.smoothing}",
            f"discount\t{self.discount!r}",
            f"vocab\t{len(self.vocab)}",
        ]
        for k in range(1, self.order + 1):
            for gram, count in sorted(self.raw_counts.get(k, {}).items()):
                lines.append(f"{k}\t{' '.join(gram)}\t{count}")
        return "\n".join(lines) + "\n"

    def __eq__(self, other) -> bool:
        if not isinstance(other, NGramModel):
            return NotImplemented
        return (
            self.order == other.order
            and self.smoothing == other.smoothing
            and self.discount == other.discount
            and self.vocab == other.vocab
            and self.raw_counts == other.raw_counts
        )


def train_ngram(
    corpus: Iterable[Union[TokenSeq, object]],
    order: int = 3,
    min_count: int = 1,
    smoothing: str = "kn",
    discount: float = 0.75,
) -> NGramModel:
    """Count padded k-grams (k = 1..order) and build a model.

    Tokens seen fewer than ``min_count`` times, and any literal reserved
    symbols, are mapped to [UNK] before counting.
    """
    if not 1 <= order <= 5:
        raise TrainingError(f"order must be in [1, 5], got {order}")
    if min_count < 1:
        raise TrainingError(f"min_count must be >= 1, got {min_count}")
    sentences = [list(_surfaces(s)) for s in corpus]
    if not sentences:
        raise TrainingError("empty corpus")

    freq: dict[str, int] = {}
    for toks in sentences:
        for t in toks:
            freq[t] = freq.get(t, 0) + 1
    kept = {t for t, c in freq.items() if c >= min_count and t not in _RESERVED}
    vocab = list(_RESERVED) + sorted(kept)
    vocab_set = set(vocab)

    raw_counts: dict[int, dict[tuple[str, ...], int]] = {
        k: {} for k in range(1, order + 1)
    }
    for toks in sentences:
        mapped = [t if t in vocab_set and t not in _RESERVED else UNK for t in toks]
        padded = [BOS] * (order - 1) + mapped + [EOS]
        for k in range(1, order + 1):
            table = raw_counts[k]
            for i in range(len(padded) - k + 1):
                gram = tuple(padded[i:i + k])
                table[gram] = table.get(gram, 0) + 1
    return NGramModel(order, vocab, raw_counts, smoothing, discount)
