"""Segmentation and lexicon scoring: boundary P/R/F, type retrieval, correlation.

Boundary scores compare internal boundary positions (1..n-1 over the
silence-free phone sequence) as sets, micro-averaged over the corpus.
Utterance-initial and -final boundaries are excluded: both sides always
share them.  A zero denominator yields 1 only when the opposite total is
also zero, otherwise 0.
"""

from __future__ import annotations

import dataclasses
from typing import Iterable, Mapping, Sequence

import numpy as np

from .corpus_io import CorpusFormatError, GoldWords
from .lexicon import AlignmentEntry, TypeForm, filter_by_ane, filter_types_by_ane, types_from_pairs
from .segmenter import Segmentation


@dataclasses.dataclass(frozen=True)
class BoundaryCounts:
    hits: int
    hyp_total: int
    gold_total: int


@dataclasses.dataclass(frozen=True)
class SweepRow:
    """Type-retrieval scores (percentages) at one ANE cutoff."""

    threshold: float | str
    precision: float
    recall: float
    f_score: float


@dataclasses.dataclass(frozen=True)
class CorrelationReport:
    """Per-run (corpus ANE, boundary F) points and their Pearson coefficient."""

    points: tuple[tuple[float, float], ...]
    rho: float


def _prf(hits: int, hyp_total: int, gold_total: int) -> tuple[float, float, float]:
    if hyp_total:
        precision = hits / hyp_total
    else:
        precision = 1.0 if gold_total == 0 else 0.0
    if gold_total:
        recall = hits / gold_total
    else:
        recall = 1.0 if hyp_total == 0 else 0.0
    f_score = 2 * precision * recall / (precision + recall) if precision + recall else 0.0
    return precision, recall, f_score


def gold_boundary_set(words: GoldWords) -> frozenset[int]:
    """Internal boundary positions implied by gold word groupings."""
    bounds = []
    pos = 0
    for group in words[:-1]:
        pos += len(group)
        bounds.append(pos)
    return frozenset(bounds)


def gold_type_set(gold: Mapping[str, GoldWords]) -> set[TypeForm]:
    """Distinct gold word forms over the corpus."""
    return {group for words in gold.values() for group in words}


def boundary_prf(
    hyp: Iterable[Segmentation],
    gold: Mapping[str, GoldWords],
) -> tuple[float, float, float, BoundaryCounts]:
    """Micro-averaged boundary precision/recall/F over a corpus."""
    hits = hyp_total = gold_total = 0
    for seg in hyp:
        words = gold.get(seg.id)
        if words is None:
            raise CorpusFormatError("no gold segmentation for sentence", sentence_id=seg.id)
        flat = tuple(p for group in words for p in group)
        phones = tuple(p for tok in seg.tokens for p in tok.phones)
        if flat != phones:
            raise CorpusFormatError(
                "gold words do not concatenate to the hypothesis phone sequence",
                sentence_id=seg.id)
        gold_bounds = gold_boundary_set(words)
        hits += len(seg.boundary_set & gold_bounds)
        hyp_total += len(seg.boundary_set)
        gold_total += len(gold_bounds)
    counts = BoundaryCounts(hits=hits, hyp_total=hyp_total, gold_total=gold_total)
    precision, recall, f_score = _prf(hits, hyp_total, gold_total)
    return precision, recall, f_score, counts


def type_prf(discovered: set[TypeForm], gold_lexicon: set[TypeForm]) -> tuple[float, float, float]:
    """Set precision/recall/F of discovered types against the gold lexicon."""
    correct = len(discovered & gold_lexicon)
    return _prf(correct, len(discovered), len(gold_lexicon))


def _check_thresholds(thresholds: Sequence) -> None:
    if not thresholds:
        raise ValueError("thresholds must be non-empty")
    numeric = []
    for i, t in enumerate(thresholds):
        if t == "all":
            if i != len(thresholds) - 1:
                raise ValueError('"all" may only terminate the threshold list')
        else:
            if isinstance(t, bool) or not isinstance(t, (int, float)):
                raise ValueError(f'threshold must be a number or "all", got {t!r}')
            if not 0.0 <= t <= 1.0:
                raise ValueError(f"threshold {t} outside [0, 1]")
            numeric.append(float(t))
    if any(b < a for a, b in zip(numeric, numeric[1:])):
        raise ValueError(f"thresholds must be ascending, got {list(thresholds)!r}")


def ane_sweep(
    pairs: Iterable[AlignmentEntry],
    gold_lexicon: set[TypeForm],
    thresholds: Sequence,
    by: str = "alignment",
) -> list[SweepRow]:
    """Type retrieval swept over ascending ANE cutoffs.

    ``by="alignment"`` keeps a type when its most confident alignment pair
    passes the cutoff; ``by="type"`` filters on type-level ANE instead.
    """
    if by not in ("alignment", "type"):
        raise ValueError(f"by must be 'alignment' or 'type', got {by!r}")
    _check_thresholds(thresholds)
    pairs = list(pairs)
    types = types_from_pairs(pairs) if by == "type" else None
    rows = []
    for t in thresholds:
        if by == "type":
            kept = filter_types_by_ane(types, t)
        else:
            kept = filter_by_ane(pairs, t)
        precision, recall, f_score = type_prf(kept, gold_lexicon)
        p_pct, r_pct = 100.0 * precision, 100.0 * recall
        f_pct = 2 * p_pct * r_pct / (p_pct + r_pct) if p_pct + r_pct else 0.0
        rows.append(SweepRow(threshold=t, precision=p_pct, recall=r_pct, f_score=f_pct))
    return rows


def pearson(xs: Sequence[float], ys: Sequence[float]) -> float:
    """Sample Pearson correlation coefficient, clamped to [-1, 1]."""
    x = np.asarray(list(xs), dtype=np.float64)
    y = np.asarray(list(ys), dtype=np.float64)
    if x.shape != y.shape or x.ndim != 1:
        raise ValueError(f"length mismatch: {x.shape} vs {y.shape}")
    if x.size < 2:
        raise ValueError("need at least 2 points")
    if np.all(x == x[0]) or np.all(y == y[0]):
        raise ValueError("constant input: correlation undefined")
    if x.size == 2:
        # two non-constant points determine the coefficient sign exactly
        return 1.0 if (x[1] - x[0]) * (y[1] - y[0]) > 0 else -1.0
    dx = x - x.mean()
    dy = y - y.mean()
    r = float((dx * dy).sum() / np.sqrt((dx * dx).sum() * (dy * dy).sum()))
    return float(min(1.0, max(-1.0, r)))


def correlate_runs(points: Sequence[tuple[float, float]]) -> CorrelationReport:
    """Pearson correlation between per-run corpus ANE and boundary F."""
    pts = tuple((float(a), float(f)) for a, f in points)
    if len(pts) < 2:
        raise ValueError("need at least 2 runs to correlate")
    rho = pearson([p[0] for p in pts], [p[1] for p in pts])
    return CorrelationReport(points=pts, rho=rho)
