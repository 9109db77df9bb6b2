"""Shared builders for hand-constructed corpus objects."""

import numpy as np

from aneseg.align_core import AlignmentMatrix
from aneseg.corpus_io import AlignmentRecord, SentencePair
from aneseg.segmenter import Segmentation, Token


def onehot_matrix(cols, n_source):
    """Matrix with row i one-hot at cols[i]."""
    m = np.zeros((len(cols), n_source))
    m[np.arange(len(cols)), cols] = 1.0
    return m


def make_record(sid, source, target, matrix, gold_words=None, validate=True):
    pair = SentencePair(
        id=sid,
        source=tuple(source),
        target=tuple(target),
        gold_words=None if gold_words is None else tuple(tuple(g) for g in gold_words),
    )
    return AlignmentRecord(pair=pair, matrix=AlignmentMatrix(matrix, validate=validate))


def seg_from_boundaries(sid, n_phones, boundaries, aligned_word="w", token_ane=0.0):
    """Segmentation over dummy phones x0..x{n-1} split at the given positions."""
    bounds = sorted(boundaries)
    phones = [f"x{i}" for i in range(n_phones)]
    starts = [0, *bounds]
    ends = [*bounds, n_phones]
    tokens = tuple(
        Token(phones=tuple(phones[a:b]), span=(a, b), aligned_word_index=0,
              aligned_word=aligned_word, token_ane=token_ane)
        for a, b in zip(starts, ends)
    )
    return Segmentation(id=sid, tokens=tokens, boundary_set=frozenset(bounds))


def gold_from_boundaries(n_phones, boundaries):
    """Gold word groupings over the same dummy phones, split at the positions."""
    bounds = sorted(boundaries)
    phones = [f"x{i}" for i in range(n_phones)]
    starts = [0, *bounds]
    ends = [*bounds, n_phones]
    return tuple(tuple(phones[a:b]) for a, b in zip(starts, ends))


def brute_force_boundary_prf(hyp_bounds_per_sent, gold_bounds_per_sent, n_phones_per_sent):
    """Position-by-position boundary comparison, the independent oracle."""
    tp = fp = fn = 0
    for hyp, gold, n in zip(hyp_bounds_per_sent, gold_bounds_per_sent, n_phones_per_sent):
        for pos in range(1, n):
            in_hyp = pos in hyp
            in_gold = pos in gold
            if in_hyp and in_gold:
                tp += 1
            elif in_hyp:
                fp += 1
            elif in_gold:
                fn += 1
    hyp_total, gold_total = tp + fp, tp + fn
    if hyp_total:
        precision = tp / hyp_total
    else:
        precision = 1.0 if gold_total == 0 else 0.0
    if gold_total:
        recall = tp / gold_total
    else:
        recall = 1.0 if hyp_total == 0 else 0.0
    f_score = 2 * precision * recall / (precision + recall) if precision + recall else 0.0
    return precision, recall, f_score, tp, hyp_total, gold_total
