"""Miniature models built from scratch for the test suite.

The sandbox cannot reach a model hub, so the suite pretrains its own
causal model: a two-layer GPT-2 on a synthetic agreement corpus, enough
signal to prefer "They all know" over "They all knows" by a wide margin.
The masked model is seeded but untrained; the oracle-equivalence tests
only need determinism, not fluency.  Both are saved as regular
directories that the bridge loads by path.
"""

from __future__ import annotations

import itertools

import torch
from tokenizers import Tokenizer, models, pre_tokenizers, trainers
from transformers import (
    BertConfig,
    BertForMaskedLM,
    GPT2Config,
    GPT2LMHeadModel,
    PreTrainedTokenizerFast,
)

PLURAL = ("They", "We", "You", "They all", "We all", "You all")
SINGULAR = ("He", "She", "It", "The manager", "The director")
VERBS = (
    ("know", "knows"),
    ("want", "wants"),
    ("see", "sees"),
    ("like", "likes"),
    ("need", "needs"),
)
COMPLEMENTS = (
    "where the conference is and when .",
    "where the meeting is and why .",
    "what the schedule says .",
    "the answer to the question .",
    "the plan for the week .",
    "when the talk starts .",
    "where the office is .",
    "what the report shows .",
)


def corpus() -> list[str]:
    out = []
    for subj, (base, third), comp in itertools.product(
        PLURAL + SINGULAR, VERBS, COMPLEMENTS
    ):
        verb = third if subj in SINGULAR else base
        out.append(f"{subj} {verb} {comp}")
    return out


def build_tokenizer(texts: list[str]) -> PreTrainedTokenizerFast:
    """Word-boundary BPE with a vocabulary small enough that longer words
    split into several pieces, which the masking logic must handle."""
    tok = Tokenizer(models.BPE(unk_token="[UNK]"))
    tok.pre_tokenizer = pre_tokenizers.Whitespace()
    trainer = trainers.BpeTrainer(
        vocab_size=96,
        special_tokens=["[UNK]", "[PAD]", "[BOS]", "[EOS]", "[MASK]"],
    )
    tok.train_from_iterator(texts, trainer)
    return PreTrainedTokenizerFast(
        tokenizer_object=tok,
        unk_token="[UNK]",
        pad_token="[PAD]",
        bos_token="[BOS]",
        eos_token="[EOS]",
        mask_token="[MASK]",
    )


def train_causal(out_dir, seed: int = 7, steps: int = 120) -> str:
    texts = corpus()
    tokenizer = build_tokenizer(texts)
    torch.manual_seed(seed)
    config = GPT2Config(
        vocab_size=len(tokenizer),
        n_positions=64,
        n_embd=64,
        n_layer=2,
        n_head=4,
        bos_token_id=tokenizer.bos_token_id,
        eos_token_id=tokenizer.eos_token_id,
    )
    model = GPT2LMHeadModel(config)
    rows = []
    for text in texts:
        ids = tokenizer(text.split(), is_split_into_words=True)["input_ids"]
        rows.append([tokenizer.bos_token_id] + ids + [tokenizer.eos_token_id])
    width = max(len(r) for r in rows)
    pad = tokenizer.pad_token_id
    input_ids = torch.tensor([r + [pad] * (width - len(r)) for r in rows])
    labels = torch.tensor([r + [-100] * (width - len(r)) for r in rows])
    attention = (input_ids != pad).long()
    optimizer = torch.optim.AdamW(model.parameters(), lr=3e-3)
    model.train()
    for _ in range(steps):
        optimizer.zero_grad()
        loss = model(input_ids=input_ids, attention_mask=attention, labels=labels).loss
        loss.backward()
        optimizer.step()
    model.eval()
    model.save_pretrained(out_dir)
    tokenizer.save_pretrained(out_dir)
    return str(out_dir)


def build_masked(out_dir, seed: int = 11) -> str:
    tokenizer = build_tokenizer(corpus())
    torch.manual_seed(seed)
    config = BertConfig(
        vocab_size=len(tokenizer),
        hidden_size=64,
        num_hidden_layers=2,
        num_attention_heads=4,
        intermediate_size=128,
        max_position_embeddings=64,
        pad_token_id=tokenizer.pad_token_id,
    )
    model = BertForMaskedLM(config)
    model.eval()
    model.save_pretrained(out_dir)
    tokenizer.save_pretrained(out_dir)
    return str(out_dir)
