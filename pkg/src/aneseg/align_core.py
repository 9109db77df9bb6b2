"""Soft-alignment matrices and normalized-entropy confidence measures.

Each matrix row is one target phone's alignment probability distribution
over the source words.  Normalized entropy (log base = number of source
words) maps a row into [0, 1]: 0 for a one-hot row, 1 for a uniform one.
Lower values mean sharper, more trustworthy alignments.  Sentence-,
corpus- and run-level summaries are arithmetic means of those values.
"""

from __future__ import annotations

import dataclasses
from typing import TYPE_CHECKING, Iterable, Sequence

import numpy as np

if TYPE_CHECKING:
    from .corpus_io import AlignmentRecord, RunSet

# A row whose sum strays further than this from 1 is rejected as data, not
# repaired.  Entropy evaluation always renormalizes exactly first, so drift
# inside the tolerance never reaches the metrics.
ROW_SUM_TOLERANCE = 1e-4

# Row sums closer to 1 than this are float drift; averaging leaves such rows
# untouched so that averaging identical runs reproduces its input bit for bit.
_RENORM_EPS = 1e-12


def _validate_rows(arr: np.ndarray) -> None:
    if not np.all(np.isfinite(arr)):
        bad = int(np.argwhere(~np.isfinite(arr))[0][0])
        raise ValueError(f"row {bad}: non-finite probability")
    if np.any(arr < 0.0):
        bad = int(np.argwhere(arr < 0.0)[0][0])
        raise ValueError(f"row {bad}: negative probability")
    if np.any(arr > 1.0):
        bad = int(np.argwhere(arr > 1.0)[0][0])
        raise ValueError(f"row {bad}: probability above 1")
    sums = arr.sum(axis=1)
    off = np.abs(sums - 1.0) > ROW_SUM_TOLERANCE
    if np.any(off):
        bad = int(np.argmax(off))
        raise ValueError(
            f"row {bad}: probabilities sum to {sums[bad]:.6g}, expected 1 "
            f"within {ROW_SUM_TOLERANCE:g}"
        )


class AlignmentMatrix:
    """Row-stochastic phone-by-word probability matrix.

    Rows must lie in [0, 1] and sum to 1 within ``ROW_SUM_TOLERANCE``.
    The stored array is read-only; ``validate=False`` skips the checks for
    callers that construct rows deliberately outside the tolerance.
    """

    __slots__ = ("probs",)

    def __init__(self, probs, validate: bool = True):
        arr = np.array(probs, dtype=np.float64)
        if arr.ndim != 2:
            raise ValueError(f"matrix must be 2-D, got shape {arr.shape}")
        if arr.shape[0] < 1 or arr.shape[1] < 1:
            raise ValueError(f"matrix must be at least 1x1, got shape {arr.shape}")
        arr += 0.0  # canonicalize -0.0 so equal values are bit-identical
        if validate:
            _validate_rows(arr)
        arr.setflags(write=False)
        self.probs = arr

    @property
    def n_phones(self) -> int:
        return self.probs.shape[0]

    @property
    def n_source(self) -> int:
        return self.probs.shape[1]

    @property
    def shape(self) -> tuple[int, int]:
        return self.probs.shape

    def renormalized(self) -> np.ndarray:
        """Rows divided by their exact float sums."""
        return self.probs / self.probs.sum(axis=1, keepdims=True)

    def __repr__(self) -> str:
        return f"AlignmentMatrix({self.n_phones}x{self.n_source})"


@dataclasses.dataclass(frozen=True)
class AneReport:
    """Per-sentence confidence summary: one NE value per phone plus their mean."""

    id: str
    per_phone: tuple[float, ...]
    sentence_ane: float


def _ne_rows(dists: np.ndarray) -> np.ndarray:
    """Normalized entropy of already-renormalized distribution rows.

    Zero entries contribute nothing (0*log 0 := 0).  A single-column row is
    necessarily one-hot, so its entropy is 0 (log base 1 is undefined).
    Results are clipped to [0, 1] to absorb last-ulp drift.
    """
    n = dists.shape[1]
    if n == 1:
        return np.zeros(dists.shape[0])
    positive = dists > 0.0
    safe = np.where(positive, dists, 1.0)
    ne = -np.where(positive, dists * np.log(safe), 0.0).sum(axis=1) / np.log(n)
    return np.clip(ne, 0.0, 1.0) + 0.0  # +0.0 turns -0.0 into 0.0


def phone_ne(row: Sequence[float] | np.ndarray) -> float:
    """Normalized entropy of a single phone's alignment distribution."""
    arr = np.asarray(row, dtype=np.float64)
    if arr.ndim != 1 or arr.size == 0:
        raise ValueError(f"need a non-empty 1-D probability row, got shape {arr.shape}")
    _validate_rows(arr[None, :])
    dist = arr / arr.sum()
    return float(_ne_rows(dist[None, :])[0])


def per_phone_ne(matrix: AlignmentMatrix) -> np.ndarray:
    """Normalized entropy of every row of ``matrix``."""
    return _ne_rows(matrix.renormalized())


def sentence_ane(matrix: AlignmentMatrix, sentence_id: str = "") -> AneReport:
    """Per-phone NE values and their unweighted mean for one sentence."""
    ne = per_phone_ne(matrix)
    return AneReport(
        id=sentence_id,
        per_phone=tuple(float(x) for x in ne),
        sentence_ane=float(ne.mean()),
    )


def corpus_ane(
    corpus: Iterable["AlignmentRecord"] | Iterable[AlignmentMatrix],
    weight: str = "sentences",
) -> float:
    """Mean ANE over a corpus.

    ``weight="sentences"`` (default) averages per-sentence ANEs;
    ``weight="phones"`` averages NE over all phones of the corpus instead.
    Records are accumulated in ascending sentence-id order so repeated
    invocations are bit-identical; bare matrices keep their given order.
    """
    if weight not in ("sentences", "phones"):
        raise ValueError(f"unknown weight mode {weight!r}")
    items = list(corpus)
    if not items:
        raise ValueError("corpus_ane: empty corpus")
    if hasattr(items[0], "pair"):
        items.sort(key=lambda rec: rec.pair.id)
        mats = [rec.matrix for rec in items]
    else:
        mats = items
    nes = [per_phone_ne(m) for m in mats]
    if weight == "phones":
        return float(np.concatenate(nes).mean())
    return float(np.array([ne.mean() for ne in nes]).mean())


def average_runs(runs: "RunSet") -> list["AlignmentRecord"]:
    """Element-wise mean of the run matrices, sentence by sentence.

    The mean is accumulated over the k per-run values sorted ascending, so
    the result does not depend on run order.  Rows whose sums drift from 1
    by more than float noise are renormalized; rows already summing to 1 at
    float precision are left untouched, which keeps averaging identical
    runs an exact identity.
    """
    if not runs.runs:
        raise ValueError("average_runs: empty run set")
    k = len(runs.runs)
    out = []
    for i, rec in enumerate(runs.runs[0]):
        stack = np.stack([run[i].matrix.probs for run in runs.runs])
        if np.all(stack == stack[0]):
            mean = stack[0].copy()
        else:
            mean = np.sort(stack, axis=0).sum(axis=0) / k
            sums = mean.sum(axis=1, keepdims=True)
            drifted = np.abs(sums - 1.0) > _RENORM_EPS
            if drifted.any():
                mean = np.where(drifted, mean / sums, mean)
        out.append(dataclasses.replace(rec, matrix=AlignmentMatrix(mean)))
    return out


def select_head(heads: "RunSet") -> tuple[int, float]:
    """Index and corpus ANE of the head with minimum corpus ANE.

    Ties break toward the lowest index.
    """
    if not heads.runs:
        raise ValueError("select_head: empty head set")
    anes = [corpus_ane(run) for run in heads.runs]
    idx = int(np.argmin(anes))
    return idx, anes[idx]
