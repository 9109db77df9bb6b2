"""Word segmentation by clustering phones that peak at the same source word.

Scanning the silence-free phone sequence left to right, a word boundary is
placed before a phone whenever its argmax source column differs from the
previous phone's, or a silence marker separates the two phones in the raw
target sequence.  Silence markers carry no matrix row themselves; they only
force boundaries.
"""

from __future__ import annotations

import dataclasses
from typing import TYPE_CHECKING, Iterable, Sequence

import numpy as np

from .align_core import per_phone_ne

if TYPE_CHECKING:
    from .corpus_io import AlignmentRecord

DEFAULT_SILENCE = "<sil>"


@dataclasses.dataclass(frozen=True)
class Token:
    """One discovered word occurrence.

    ``span`` is half-open over silence-free phone indices.  All phones in
    the span share ``aligned_word_index`` as their argmax column, and
    ``token_ane`` is the mean per-phone NE over the span.
    """

    phones: tuple[str, ...]
    span: tuple[int, int]
    aligned_word_index: int
    aligned_word: str
    token_ane: float


@dataclasses.dataclass(frozen=True)
class Segmentation:
    """Ordered tokens tiling one sentence's silence-free phone sequence."""

    id: str
    tokens: tuple[Token, ...]
    boundary_set: frozenset[int]


def argmax_row(row: Sequence[float] | np.ndarray) -> int:
    """Column index of the maximal entry; ties break toward the lowest index."""
    arr = np.asarray(row, dtype=np.float64)
    if arr.size == 0:
        raise ValueError("argmax_row: empty row")
    return int(np.argmax(arr))


def segment(record: "AlignmentRecord", silence_token: str = DEFAULT_SILENCE) -> Segmentation:
    """Segment one sentence's phones into word tokens."""
    pair, matrix = record.pair, record.matrix
    phones = [t for t in pair.target if t != silence_token]
    n = len(phones)
    if matrix.n_phones != n:
        raise ValueError(
            f"id {pair.id!r}: matrix has {matrix.n_phones} rows but target has "
            f"{n} non-silence phones"
        )

    # silence_before[i]: a silence marker sits between phones i-1 and i in the
    # raw target; runs of markers collapse into one forced boundary.
    silence_before = np.zeros(n, dtype=bool)
    idx = 0
    pending = False
    for tok in pair.target:
        if tok == silence_token:
            pending = True
        else:
            silence_before[idx] = pending
            pending = False
            idx += 1

    cols = matrix.probs.argmax(axis=1)
    ne = per_phone_ne(matrix)

    bounds = [i for i in range(1, n) if cols[i] != cols[i - 1] or silence_before[i]]
    starts = [0, *bounds]
    ends = [*bounds, n]
    tokens = []
    for a, b in zip(starts, ends):
        col = int(cols[a])
        tokens.append(
            Token(
                phones=tuple(phones[a:b]),
                span=(a, b),
                aligned_word_index=col,
                aligned_word=pair.source[col],
                token_ane=float(ne[a:b].mean()),
            )
        )
    return Segmentation(id=pair.id, tokens=tuple(tokens), boundary_set=frozenset(bounds))


def segment_corpus(
    corpus: Iterable["AlignmentRecord"], silence_token: str = DEFAULT_SILENCE
) -> list[Segmentation]:
    """Segment every sentence independently, preserving corpus order."""
    return [segment(rec, silence_token) for rec in corpus]
