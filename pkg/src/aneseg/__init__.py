"""Unsupervised word segmentation and entropy-based alignment confidence.

Turns per-sentence soft-alignment probability matrices (target phones over
source words) into word segmentations, and quantifies alignment quality as
Average Normalized Entropy at phone, sentence, token, type, alignment-pair
and corpus granularity, with boundary and type-retrieval evaluation.
"""

from .align_core import (
    AlignmentMatrix,
    AneReport,
    average_runs,
    corpus_ane,
    per_phone_ne,
    phone_ne,
    select_head,
    sentence_ane,
)
from .corpus_io import (
    AlignmentRecord,
    CorpusFormatError,
    RunSet,
    SentencePair,
    attach_gold,
    load_gold,
    load_run,
    load_runs,
    read_lexicon,
    read_segmentation,
    write_gold,
    write_lexicon,
    write_run,
    write_segmentation,
)
from .evaluate import (
    BoundaryCounts,
    CorrelationReport,
    SweepRow,
    ane_sweep,
    boundary_prf,
    correlate_runs,
    gold_type_set,
    pearson,
    type_prf,
)
from .lexicon import (
    AlignmentEntry,
    TypeEntry,
    build_lexicon,
    filter_by_ane,
    filter_types_by_ane,
    rank_types,
    types_from_pairs,
)
from .segmenter import (
    DEFAULT_SILENCE,
    Segmentation,
    Token,
    argmax_row,
    segment,
    segment_corpus,
)
from .synth import SynthConfig, generate, temperature_sweep

__version__ = "0.1.0"
