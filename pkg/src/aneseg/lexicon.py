"""Aggregation of discovered tokens into types and alignment pairs.

A type is the distinct phone sequence of a set of identical tokens; an
alignment pair is a (type, translated word) combination.  Both carry the
unweighted mean of their occurrences' token ANE, which ranks the lexicon
from most to least confident.
"""

from __future__ import annotations

import dataclasses
from collections import defaultdict
from typing import Iterable

import numpy as np

from .segmenter import Segmentation

TypeForm = tuple[str, ...]


@dataclasses.dataclass(frozen=True)
class TypeEntry:
    type_form: TypeForm
    count: int
    type_ane: float


@dataclasses.dataclass(frozen=True)
class AlignmentEntry:
    type_form: TypeForm
    translation: str
    count: int
    alignment_ane: float


def build_lexicon(
    segmentations: Iterable[Segmentation],
) -> tuple[list[TypeEntry], list[AlignmentEntry]]:
    """Group discovered tokens by type and by (type, translation) pair.

    ANE values are unweighted means over token occurrences, accumulated in
    corpus order.  Both listings come back sorted ascending by ANE, ties
    broken lexicographically, so output is deterministic.
    """
    type_anes: dict[TypeForm, list[float]] = defaultdict(list)
    pair_anes: dict[tuple[TypeForm, str], list[float]] = defaultdict(list)
    for seg in segmentations:
        for tok in seg.tokens:
            type_anes[tok.phones].append(tok.token_ane)
            pair_anes[(tok.phones, tok.aligned_word)].append(tok.token_ane)
    types = [
        TypeEntry(type_form=form, count=len(anes), type_ane=float(np.mean(anes)))
        for form, anes in type_anes.items()
    ]
    pairs = [
        AlignmentEntry(type_form=form, translation=word, count=len(anes),
                       alignment_ane=float(np.mean(anes)))
        for (form, word), anes in pair_anes.items()
    ]
    types.sort(key=lambda e: (e.type_ane, e.type_form))
    pairs.sort(key=lambda e: (e.alignment_ane, e.type_form, e.translation))
    return types, pairs


def types_from_pairs(pairs: Iterable[AlignmentEntry]) -> list[TypeEntry]:
    """Recombine alignment pairs into type entries.

    The type ANE is the count-weighted mean of its pairs' ANEs, which equals
    the unweighted mean over the underlying token occurrences.
    """
    counts: dict[TypeForm, int] = defaultdict(int)
    sums: dict[TypeForm, float] = defaultdict(float)
    for p in pairs:
        counts[p.type_form] += p.count
        sums[p.type_form] += p.count * p.alignment_ane
    types = [
        TypeEntry(type_form=form, count=counts[form], type_ane=sums[form] / counts[form])
        for form in counts
    ]
    types.sort(key=lambda e: (e.type_ane, e.type_form))
    return types


def _check_threshold(threshold) -> float | None:
    if threshold == "all":
        return None
    if isinstance(threshold, bool) or not isinstance(threshold, (int, float)):
        raise ValueError(f'threshold must be a number in [0, 1] or "all", got {threshold!r}')
    if not 0.0 <= threshold <= 1.0:
        raise ValueError(f"threshold {threshold} outside [0, 1]")
    return float(threshold)


def filter_by_ane(
    pairs: Iterable[AlignmentEntry],
    threshold,
    require_all_pairs: bool = False,
) -> set[TypeForm]:
    """Types whose alignment pairs pass the ANE cutoff.

    By default a type survives if at least one of its pairs has ANE <=
    threshold (its most confident alignment); ``require_all_pairs`` demands
    that every pair passes.  The sentinel ``"all"`` keeps every type.
    """
    cut = _check_threshold(threshold)
    if cut is None:
        return {p.type_form for p in pairs}
    best: dict[TypeForm, float] = {}
    pick = max if require_all_pairs else min
    for p in pairs:
        if p.type_form in best:
            best[p.type_form] = pick(best[p.type_form], p.alignment_ane)
        else:
            best[p.type_form] = p.alignment_ane
    return {form for form, ane in best.items() if ane <= cut}


def filter_types_by_ane(types: Iterable[TypeEntry], threshold) -> set[TypeForm]:
    """Types whose type-level ANE passes the cutoff (``"all"`` keeps every type)."""
    cut = _check_threshold(threshold)
    if cut is None:
        return {t.type_form for t in types}
    return {t.type_form for t in types if t.type_ane <= cut}


def rank_types(
    pairs: Iterable[AlignmentEntry],
    direction: str = "ascending",
    limit: int | None = None,
) -> list[AlignmentEntry]:
    """Alignment pairs sorted by ANE, ties lexicographic by type then translation."""
    if direction not in ("ascending", "descending"):
        raise ValueError(f"direction must be 'ascending' or 'descending', got {direction!r}")
    if limit is not None and limit < 0:
        raise ValueError(f"limit must be non-negative, got {limit}")
    reverse = direction == "descending"
    ranked = sorted(pairs, key=lambda e: (-e.alignment_ane if reverse else e.alignment_ane,
                                          e.type_form, e.translation))
    return ranked if limit is None else ranked[:limit]
