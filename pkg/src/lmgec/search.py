"""Greedy left-to-right correction search.

Each candidate position is visited once per pass; an alternative is applied
only when its sentence score beats the current score by more than the
acceptance margin tau.  Applied edits update the working sentence, so later
positions are scored in the context of earlier fixes.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Iterable, Optional, Sequence

from .confusion import CandidateConfig, CandidateSet, Lexicon, generate_candidates
from .scorer import Scorer, ScorerError, ScorerUnavailableError
from .textcore import Edit, Sentence

TAU_OFF = math.inf


@dataclass(frozen=True)
class AppliedEdit:
    """An accepted substitution in original-sentence coordinates."""

    edit: Edit
    score_before: float
    score_after: float


@dataclass(frozen=True)
class CorrectionResult:
    original: Sentence
    corrected: Sentence
    applied: tuple[AppliedEdit, ...]
    original_score: float
    passes: int

    def edits(self) -> tuple[Edit, ...]:
        """Applied edits sorted by position, ready for apply_edits."""
        return tuple(sorted((a.edit for a in self.applied), key=lambda e: e.start))


@dataclass
class CorpusReport:
    originals: list[Sentence]
    results: list[Optional[CorrectionResult]]
    errors: list[tuple[int, str]]

    def corrected_sentences(self) -> list[Sentence]:
        """Corrections where available, pass-through originals elsewhere."""
        return [
            res.corrected if res is not None else self.originals[i]
            for i, res in enumerate(self.results)
        ]


def _replacement_width(edit: Edit) -> int:
    return len(edit.replacement_tokens())


def correct_sentence(
    sentence: Sentence,
    candidates: Sequence[CandidateSet],
    scorer: Scorer,
    tau: float,
    max_passes: int = 1,
) -> CorrectionResult:
    """Run up to max_passes greedy sweeps; stop early when a sweep changes
    nothing.  tau = math.inf disables all edits (useful as a baseline)."""
    if math.isnan(tau) or tau < 0:
        raise ValueError(f"tau must be >= 0, got {tau}")
    if max_passes < 1:
        raise ValueError(f"max_passes must be >= 1, got {max_passes}")
    original = sentence.surfaces
    work = list(original)
    base_score = scorer.score(work)
    original_score = base_score
    applied: list[AppliedEdit] = []
    edited: set[int] = set()
    ordered = sorted(candidates, key=lambda c: c.start)
    passes = 0
    for _ in range(max_passes):
        passes += 1
        changed = False
        for cand in ordered:
            if cand.start in edited:
                continue
            # Map original position into working coordinates past prior edits.
            delta = sum(
                _replacement_width(a.edit) - (a.edit.end - a.edit.start)
                for a in applied
                if a.edit.start < cand.start
            )
            pos = cand.start + delta
            if not 0 <= pos < len(work) or work[pos] != original[cand.start]:
                continue
            variants: list[tuple[str, list[str]]] = []
            for alt in cand.alternatives:
                alt_tokens = alt.split()
                trial = work[:pos] + alt_tokens + work[pos + 1:]
                if not trial:
                    continue
                variants.append((alt, trial))
            if not variants:
                continue
            scores = scorer.score_batch([trial for _, trial in variants])
            best = 0
            for i in range(1, len(scores)):
                if scores[i] > scores[best]:
                    best = i
            if scores[best] > base_score + tau:
                alt, trial = variants[best]
                applied.append(
                    AppliedEdit(
                        Edit(cand.start, cand.end, alt, cand.category),
                        base_score,
                        scores[best],
                    )
                )
                work = trial
                base_score = scores[best]
                edited.add(cand.start)
                changed = True
        if not changed:
            break
    return CorrectionResult(
        original=sentence,
        corrected=Sentence.from_surfaces(work),
        applied=tuple(applied),
        original_score=original_score,
        passes=passes,
    )


def correct_corpus(
    sentences: Iterable[Sentence],
    lex: Lexicon,
    scorer: Scorer,
    tau: float,
    *,
    config: Optional[CandidateConfig] = None,
    max_passes: int = 1,
    jobs: int = 1,
) -> CorpusReport:
    """Correct every sentence; per-sentence scorer errors are collected and
    leave a None result, but a dead scorer aborts the run."""
    items = list(sentences)
    report = CorpusReport(originals=items, results=[None] * len(items), errors=[])

    def run(i: int) -> None:
        cands = generate_candidates(items[i], lex, config)
        try:
            report.results[i] = correct_sentence(
                items[i], cands, scorer, tau, max_passes=max_passes
            )
        except ScorerUnavailableError:
            raise
        except ScorerError as exc:
            report.errors.append((i, str(exc)))

    if jobs <= 1:
        for i in range(len(items)):
            run(i)
    else:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            for _ in pool.map(run, range(len(items))):
                pass
    report.errors.sort(key=lambda pair: pair[0])
    return report
