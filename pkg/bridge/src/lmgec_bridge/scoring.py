"""Sentence log-likelihoods under pretrained Transformer models.

The wire protocol carries whole words; subword tokenization happens here,
which keeps the client side model-agnostic.  Causal mode sums next-piece
conditionals with begin-of-text conditioning.  Masked mode computes the
pseudo-log-likelihood: every word is masked in turn (all of its subword
pieces jointly) and the masked pieces' log-probabilities are summed.

Scores are raw sums in natural log, never length-normalized: the caller
compares near-identical sentences against a margin, and normalization
would silently change what that margin means.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import torch

MODES = ("causal", "masked")


@dataclass(frozen=True)
class BridgeConfig:
    """How to load and drive the model; immutable for the process."""

    model: str
    mode: str = "causal"
    device: str = "cpu"
    max_batch: int = 16

    def __post_init__(self):
        if self.mode not in MODES:
            raise ValueError(f"mode must be one of {MODES}, got {self.mode!r}")
        if self.max_batch < 1:
            raise ValueError(f"max_batch must be >= 1, got {self.max_batch}")


def _max_positions(model) -> int | None:
    for name in ("max_position_embeddings", "n_positions"):
        value = getattr(model.config, name, None)
        if isinstance(value, int) and value > 0:
            return value
    return None


def _check_length(count: int, limit: int | None) -> None:
    if limit is not None and count > limit:
        raise ValueError(f"{count} pieces exceed the model limit of {limit}")


class CausalScorer:
    """logprob = Σ_t ln P(piece_t | begin-of-text, pieces_<t)."""

    mode = "causal"

    def __init__(self, config: BridgeConfig):
        from transformers import AutoModelForCausalLM, AutoTokenizer

        self.tokenizer = AutoTokenizer.from_pretrained(config.model)
        self.model = AutoModelForCausalLM.from_pretrained(config.model)
        self.model.to(config.device)
        self.model.eval()
        self.device = config.device
        # GPT-2 style tokenizers reuse end-of-text as the begin marker
        bos = self.tokenizer.bos_token_id
        if bos is None:
            bos = self.tokenizer.eos_token_id
        if bos is None:
            raise ValueError("tokenizer defines no begin-of-text token")
        self.bos_id = bos
        self.limit = _max_positions(self.model)

    def logprob(self, words: Sequence[str]) -> float:
        if not words:
            raise ValueError("empty token list")
        encoded = self.tokenizer(
            list(words), is_split_into_words=True, add_special_tokens=False
        )
        ids = [self.bos_id] + encoded["input_ids"]
        _check_length(len(ids), self.limit)
        seq = torch.tensor([ids], device=self.device)
        with torch.no_grad():
            logits = self.model(input_ids=seq).logits[0]
        logprobs = torch.log_softmax(logits.float(), dim=-1)
        steps = torch.arange(len(ids) - 1)
        targets = torch.tensor(ids[1:])
        return logprobs[steps, targets].sum().item()


class MaskedScorer:
    """Pseudo-log-likelihood: mask each word's pieces jointly and sum the
    masked pieces' ln P; variants are batched up to max_batch per forward."""

    mode = "masked"

    def __init__(self, config: BridgeConfig):
        from transformers import AutoModelForMaskedLM, AutoTokenizer

        self.tokenizer = AutoTokenizer.from_pretrained(config.model)
        self.model = AutoModelForMaskedLM.from_pretrained(config.model)
        self.model.to(config.device)
        self.model.eval()
        self.device = config.device
        if self.tokenizer.mask_token_id is None:
            raise ValueError("tokenizer defines no mask token")
        self.mask_id = self.tokenizer.mask_token_id
        self.max_batch = config.max_batch
        self.limit = _max_positions(self.model)

    def logprob(self, words: Sequence[str]) -> float:
        if not words:
            raise ValueError("empty token list")
        encoded = self.tokenizer(list(words), is_split_into_words=True)
        ids = encoded["input_ids"]
        _check_length(len(ids), self.limit)
        spans: dict[int, list[int]] = {}
        for pos, word in enumerate(encoded.word_ids()):
            if word is not None:
                spans.setdefault(word, []).append(pos)
        order = sorted(spans)
        variants = []
        for word in order:
            masked = list(ids)
            for pos in spans[word]:
                masked[pos] = self.mask_id
            variants.append(masked)
        total = 0.0
        for lo in range(0, len(variants), self.max_batch):
            chunk = variants[lo : lo + self.max_batch]
            batch = torch.tensor(chunk, device=self.device)
            with torch.no_grad():
                logits = self.model(input_ids=batch).logits
            logprobs = torch.log_softmax(logits.float(), dim=-1)
            for row, word in enumerate(order[lo : lo + len(chunk)]):
                for pos in spans[word]:
                    total += logprobs[row, pos, ids[pos]].item()
        return total


def load_scorer(config: BridgeConfig):
    """Model wrapper for the configured mode; raises if the checkpoint
    does not fit the requested architecture."""
    cls = CausalScorer if config.mode == "causal" else MaskedScorer
    return cls(config)
