"""MaxMatch evaluation of hypothesis corrections against gold edits.

The source/hypothesis pair is aligned by Levenshtein distance; maximal
runs of non-matching operations become atomic edit arcs, and consecutive
arcs separated by short matched gaps are additionally offered as merged
arcs.  Selection picks the decomposition that matches as many gold edits
as possible, preferring fewer edits and then the lexicographically
smallest boundary sequence, so results are deterministic.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Optional, Sequence, Union

from .textcore import Edit, GoldAnnotation, M2Entry, Sentence

_M, _S, _D, _I = "M", "S", "D", "I"


@dataclass(frozen=True)
class Arc:
    """One candidate edit: replace source span by hypothesis span."""

    src_start: int
    src_end: int
    hyp_start: int
    hyp_end: int
    replacement: str
    first_atomic: int
    last_atomic: int

    def signature(self) -> tuple[int, int, str]:
        return (self.src_start, self.src_end, " ".join(self.replacement.split()))

    def to_edit(self, type_label: str = "") -> Edit:
        return Edit(self.src_start, self.src_end, self.replacement, type_label)


@dataclass(frozen=True)
class EditLattice:
    source: Sentence
    hypothesis: Sentence
    atomic: tuple[Arc, ...]
    merged: tuple[Arc, ...]
    gaps: tuple[int, ...]

    @property
    def arcs(self) -> tuple[Arc, ...]:
        return tuple(
            sorted(
                self.atomic + self.merged,
                key=lambda a: (a.first_atomic, a.last_atomic),
            )
        )


def _align(src: Sequence[str], hyp: Sequence[str]) -> list[str]:
    """Operation string of an optimal alignment; ties prefer match over
    substitute over delete over insert."""
    n, m = len(src), len(hyp)
    cost = [[0] * (m + 1) for _ in range(n + 1)]
    op: list[list[str]] = [[""] * (m + 1) for _ in range(n + 1)]
    for i in range(1, n + 1):
        cost[i][0] = i
        op[i][0] = _D
    for j in range(1, m + 1):
        cost[0][j] = j
        op[0][j] = _I
    for i in range(1, n + 1):
        for j in range(1, m + 1):
            options: list[tuple[int, str]] = []
            if src[i - 1] == hyp[j - 1]:
                options.append((cost[i - 1][j - 1], _M))
            else:
                options.append((cost[i - 1][j - 1] + 1, _S))
            options.append((cost[i - 1][j] + 1, _D))
            options.append((cost[i][j - 1] + 1, _I))
            best_cost = min(c for c, _ in options)
            for c, o in options:
                if c == best_cost:
                    cost[i][j] = c
                    op[i][j] = o
                    break
    ops: list[str] = []
    i, j = n, m
    while i > 0 or j > 0:
        o = op[i][j]
        ops.append(o)
        if o == _M or o == _S:
            i, j = i - 1, j - 1
        elif o == _D:
            i -= 1
        else:
            j -= 1
    ops.reverse()
    return ops


def extract_lattice(
    source: Sentence, hypothesis: Sentence, max_unchanged_words: int = 2
) -> EditLattice:
    """Atomic arcs plus every merge of consecutive arcs whose matched gaps
    are each at most max_unchanged_words tokens."""
    if max_unchanged_words < 0:
        raise ValueError("max_unchanged_words must be >= 0")
    src = source.surfaces
    hyp = hypothesis.surfaces
    ops = _align(src, hyp)

    atomic: list[Arc] = []
    gaps: list[int] = []
    i = j = 0
    run: Optional[list[int]] = None  # [src_start, hyp_start]
    match_streak = 0
    for o in ops:
        if o == _M:
            if run is not None:
                atomic.append(_close_run(run, i, j, hyp, len(atomic)))
                run = None
                match_streak = 0
            match_streak += 1
            i += 1
            j += 1
            continue
        if run is None:
            if atomic:
                gaps.append(match_streak)
            run = [i, j]
        if o == _S:
            i += 1
            j += 1
        elif o == _D:
            i += 1
        else:
            j += 1
    if run is not None:
        atomic.append(_close_run(run, i, j, hyp, len(atomic)))

    merged: list[Arc] = []
    for a in range(len(atomic)):
        for b in range(a + 1, len(atomic)):
            if gaps[b - 1] > max_unchanged_words:
                break
            first, last = atomic[a], atomic[b]
            merged.append(
                Arc(
                    first.src_start,
                    last.src_end,
                    first.hyp_start,
                    last.hyp_end,
                    " ".join(hyp[first.hyp_start:last.hyp_end]),
                    a,
                    b,
                )
            )
    return EditLattice(source, hypothesis, tuple(atomic), tuple(merged), tuple(gaps))


def _close_run(run: list[int], i: int, j: int, hyp: Sequence[str], index: int) -> Arc:
    src_start, hyp_start = run
    return Arc(
        src_start, i, hyp_start, j, " ".join(hyp[hyp_start:j]), index, index
    )


GoldEdits = Union[GoldAnnotation, Sequence[Edit]]


def _gold_edits(gold: GoldEdits) -> tuple[Edit, ...]:
    if isinstance(gold, GoldAnnotation):
        return gold.edits
    return tuple(gold)


def maxmatch_select(lattice: EditLattice, gold: GoldEdits) -> list[Edit]:
    """Partition the atomic arcs into consecutive groups (each a lattice
    arc) maximizing gold matches, then minimizing edit count, then taking
    the lexicographically smallest (first, last) boundary sequence."""
    edits = _gold_edits(gold)
    gold_by_sig = {e.signature(): e for e in edits}
    K = len(lattice.atomic)
    if K == 0:
        return []
    by_start: list[list[Arc]] = [[] for _ in range(K)]
    for arc in lattice.atomic + lattice.merged:
        by_start[arc.first_atomic].append(arc)

    # best[i]: (-matches, count, boundary sequence) for atomic arcs i..K-1
    best: list[Optional[tuple]] = [None] * (K + 1)
    choice: list[Optional[Arc]] = [None] * K
    best[K] = (0, 0, ())
    for i in range(K - 1, -1, -1):
        for arc in by_start[i]:
            tail = best[arc.last_atomic + 1]
            matched = 1 if arc.signature() in gold_by_sig else 0
            key = (
                tail[0] - matched,
                tail[1] + 1,
                ((i, arc.last_atomic),) + tail[2],
            )
            if best[i] is None or key < best[i]:
                best[i] = key
                choice[i] = arc

    selected: list[Edit] = []
    i = 0
    while i < K:
        arc = choice[i]
        gold_edit = gold_by_sig.get(arc.signature())
        selected.append(arc.to_edit(gold_edit.type_label if gold_edit else ""))
        i = arc.last_atomic + 1
    return selected


@dataclass(frozen=True)
class EvalCounts:
    tp: int = 0
    fp: int = 0
    fn: int = 0

    def __add__(self, other: "EvalCounts") -> "EvalCounts":
        return EvalCounts(self.tp + other.tp, self.fp + other.fp, self.fn + other.fn)

    @property
    def precision(self) -> float:
        return 1.0 if self.tp + self.fp == 0 else self.tp / (self.tp + self.fp)

    @property
    def recall(self) -> float:
        return 1.0 if self.tp + self.fn == 0 else self.tp / (self.tp + self.fn)

    def f(self, beta: float = 0.5) -> float:
        return f_beta(self.precision, self.recall, beta)


def f_beta(precision: float, recall: float, beta: float = 0.5) -> float:
    """Weighted harmonic mean; scale-invariant, so percentages work too."""
    if precision == 0.0 and recall == 0.0:
        return 0.0
    b2 = beta * beta
    return (1.0 + b2) * precision * recall / (b2 * precision + recall)


def sentence_counts(selection: Sequence[Edit], gold: GoldEdits) -> EvalCounts:
    gold_sigs = {e.signature() for e in _gold_edits(gold)}
    tp = sum(1 for e in selection if e.signature() in gold_sigs)
    return EvalCounts(tp=tp, fp=len(selection) - tp, fn=len(gold_sigs) - tp)


@dataclass(frozen=True)
class SentenceEval:
    index: int
    annotator_id: int
    counts: EvalCounts
    edits: tuple[Edit, ...]


@dataclass(frozen=True)
class EvalReport:
    counts: EvalCounts
    beta: float
    sentences: tuple[SentenceEval, ...]

    @property
    def precision(self) -> float:
        return self.counts.precision

    @property
    def recall(self) -> float:
        return self.counts.recall

    @property
    def f_score(self) -> float:
        return self.counts.f(self.beta)


def _lower_sentence(s: Sentence) -> Sentence:
    return Sentence.from_surfaces(t.lower() for t in s.surfaces)


def _lower_gold(g: GoldAnnotation) -> GoldAnnotation:
    return GoldAnnotation(
        g.annotator_id,
        tuple(Edit(e.start, e.end, e.replacement.lower(), e.type_label) for e in g.edits),
    )


def evaluate_corpus(
    sources: Sequence[Sentence],
    hypotheses: Sequence[Sentence],
    golds: Sequence[Sequence[GoldAnnotation]],
    beta: float = 0.5,
    max_unchanged_words: int = 2,
    ignore_case: bool = False,
) -> EvalReport:
    """Corpus-level scores; with several annotators per sentence the one
    maximizing the running corpus F is charged, ties to the lowest id."""
    if not (len(sources) == len(hypotheses) == len(golds)):
        raise ValueError(
            f"length mismatch: {len(sources)} sources, "
            f"{len(hypotheses)} hypotheses, {len(golds)} gold annotation sets"
        )
    running = EvalCounts()
    per_sentence: list[SentenceEval] = []
    for idx, (src, hyp, anns) in enumerate(zip(sources, hypotheses, golds)):
        if not anns:
            raise ValueError(f"sentence {idx} has no gold annotators")
        if ignore_case:
            src = _lower_sentence(src)
            hyp = _lower_sentence(hyp)
            anns = [_lower_gold(a) for a in anns]
        lattice = extract_lattice(src, hyp, max_unchanged_words)
        best: Optional[tuple[float, int, EvalCounts, list[Edit]]] = None
        for ann in sorted(anns, key=lambda a: a.annotator_id):
            selection = maxmatch_select(lattice, ann)
            counts = sentence_counts(selection, ann)
            f = (running + counts).f(beta)
            if best is None or f > best[0]:
                best = (f, ann.annotator_id, counts, selection)
        _, ann_id, counts, selection = best
        running = running + counts
        per_sentence.append(SentenceEval(idx, ann_id, counts, tuple(selection)))
    return EvalReport(running, beta, tuple(per_sentence))


@dataclass(frozen=True)
class TauResult:
    tau: float
    counts: EvalCounts
    precision: float
    recall: float
    f_score: float
    edits_applied: int
    scorer_errors: int


@dataclass(frozen=True)
class SweepResult:
    rows: tuple[TauResult, ...]
    best: TauResult


def sweep_tau(
    entries: Sequence[M2Entry],
    lex,
    scorer,
    taus: Iterable[float] = (0.0, 2.0, 4.0, 6.0, 8.0),
    *,
    beta: float = 0.5,
    config=None,
    max_passes: int = 1,
    max_unchanged_words: int = 2,
    ignore_case: bool = False,
    jobs: int = 1,
) -> SweepResult:
    """Correct the corpus once per margin and score each run; the best row
    maximizes F, ties going to the larger (more conservative) margin."""
    from .search import correct_corpus

    tau_list = sorted(set(float(t) for t in taus))
    if not tau_list:
        raise ValueError("no tau values to sweep")
    sources = [e.sentence for e in entries]
    golds = [list(e.annotations) for e in entries]
    rows: list[TauResult] = []
    for tau in tau_list:
        report = correct_corpus(
            sources, lex, scorer, tau, config=config, max_passes=max_passes, jobs=jobs
        )
        hyps = report.corrected_sentences()
        n_edits = sum(len(r.applied) for r in report.results if r is not None)
        ev = evaluate_corpus(
            sources, hyps, golds, beta, max_unchanged_words, ignore_case
        )
        rows.append(
            TauResult(
                tau=tau,
                counts=ev.counts,
                precision=ev.precision,
                recall=ev.recall,
                f_score=ev.f_score,
                edits_applied=n_edits,
                scorer_errors=len(report.errors),
            )
        )
    best = rows[0]
    for row in rows[1:]:
        if row.f_score >= best.f_score:
            best = row
    return SweepResult(tuple(rows), best)
