"""Seeded synthetic parallel corpora with known gold segmentation.

Each sentence draws words from a fixed synthetic bilingual lexicon; every
target word expands to a fixed phone sequence whose gold alignment is
one-hot at the word's source column.  Adjacent words sharing a translation
collapse onto one source column (as in real parallel text) and always get
a silence marker between them, so gold boundaries stay recoverable by the
peak rule.  Emitted rows blend the one-hot toward uniform with temperature
T via sigma = T/(1+T) (T=0 keeps the one-hot exactly), then mix in an
optional random distractor distribution.

Randomness comes from numpy's default PCG64 generator seeded from the
config, with separate streams for sentence structure and matrix noise, so
corpora that differ only in temperature share ids, sources, targets and
gold exactly.
"""

from __future__ import annotations

import dataclasses
from typing import Iterable, Sequence

import numpy as np

from .align_core import AlignmentMatrix
from .corpus_io import AlignmentRecord, GoldWords, RunSet, SentencePair
from .segmenter import DEFAULT_SILENCE

_PHONES = (
    "aa", "bb", "ch", "dd", "eh", "ff", "gg", "ih", "jj", "kk", "ll", "mm",
    "nn", "oh", "pp", "qu", "rr", "ss", "tt", "uh", "vv", "ww", "yy", "zz",
)


@dataclasses.dataclass(frozen=True)
class SynthConfig:
    seed: int = 0
    n_sentences: int = 100
    source_vocab: int = 20
    word_len_range: tuple[int, int] = (2, 4)
    sent_len_range: tuple[int, int] = (3, 8)
    temperature: float = 0.0
    distractor_noise: float = 0.0
    silence_prob: float = 0.3
    silence_token: str = DEFAULT_SILENCE
    ambiguous: bool = False

    def __post_init__(self):
        if self.n_sentences < 0:
            raise ValueError(f"n_sentences must be >= 0, got {self.n_sentences}")
        if self.source_vocab < 1:
            raise ValueError(f"source_vocab must be >= 1, got {self.source_vocab}")
        for name, (lo, hi) in (("word_len_range", self.word_len_range),
                               ("sent_len_range", self.sent_len_range)):
            if lo < 1 or hi < lo:
                raise ValueError(f"{name} must satisfy 1 <= min <= max, got ({lo}, {hi})")
        if self.temperature < 0:
            raise ValueError(f"temperature must be >= 0, got {self.temperature}")
        if not 0.0 <= self.distractor_noise < 1.0:
            raise ValueError(f"distractor_noise must be in [0, 1), got {self.distractor_noise}")
        if not 0.0 <= self.silence_prob <= 1.0:
            raise ValueError(f"silence_prob must be in [0, 1], got {self.silence_prob}")
        if not self.silence_token:
            raise ValueError("silence_token must be non-empty")


def _build_lexicon(config: SynthConfig, rng: np.random.Generator):
    """Distinct target phone sequences plus their translations."""
    lo, hi = config.word_len_range
    forms: list[tuple[str, ...]] = []
    seen: set[tuple[str, ...]] = set()
    for _ in range(config.source_vocab):
        for _attempt in range(1000):
            length = int(rng.integers(lo, hi + 1))
            form = tuple(_PHONES[int(k)] for k in rng.integers(0, len(_PHONES), length))
            if form not in seen and config.silence_token not in form:
                break
        else:
            raise ValueError(
                f"cannot draw {config.source_vocab} distinct word forms of length "
                f"{lo}..{hi}; shrink the vocabulary or widen the range")
        seen.add(form)
        forms.append(form)
    if config.ambiguous:
        translations = [f"w{i // 2:03d}" for i in range(config.source_vocab)]
    else:
        translations = [f"w{i:03d}" for i in range(config.source_vocab)]
    return forms, translations


def generate(
    config: SynthConfig,
) -> tuple[list[AlignmentRecord], dict[str, GoldWords], set[tuple[str, ...]]]:
    """Build a corpus plus its gold mapping and gold lexicon.

    Fully deterministic for a given config.
    """
    struct_seed, matrix_seed = np.random.SeedSequence(config.seed).spawn(2)
    rng_struct = np.random.default_rng(struct_seed)
    rng_matrix = np.random.default_rng(matrix_seed)
    forms, translations = _build_lexicon(config, rng_struct)

    sigma = config.temperature / (1.0 + config.temperature)
    noise = config.distractor_noise
    lo, hi = config.sent_len_range
    id_width = max(5, len(str(max(config.n_sentences - 1, 0))))

    records: list[AlignmentRecord] = []
    gold: dict[str, GoldWords] = {}
    gold_lexicon: set[tuple[str, ...]] = set()
    for si in range(config.n_sentences):
        length = int(rng_struct.integers(lo, hi + 1))
        draws = [int(k) for k in rng_struct.integers(0, config.source_vocab, length)]

        # adjacent words with the same translation share one source column
        source: list[str] = []
        cols: list[int] = []
        for k in draws:
            word = translations[k]
            if source and source[-1] == word:
                cols.append(len(source) - 1)
            else:
                source.append(word)
                cols.append(len(source) - 1)

        target: list[str] = []
        row_cols: list[int] = []
        groups: list[tuple[str, ...]] = []
        for widx, k in enumerate(draws):
            if widx > 0:
                forced = cols[widx] == cols[widx - 1]
                if forced or rng_struct.random() < config.silence_prob:
                    target.append(config.silence_token)
            target.extend(forms[k])
            groups.append(forms[k])
            row_cols.extend([cols[widx]] * len(forms[k]))
            gold_lexicon.add(forms[k])

        n_src = len(source)
        onehot = np.zeros((len(row_cols), n_src))
        onehot[np.arange(len(row_cols)), row_cols] = 1.0
        if sigma > 0.0:
            probs = (1.0 - sigma) * onehot + sigma / n_src
        else:
            probs = onehot
        if noise > 0.0:
            distractor = rng_matrix.dirichlet(np.ones(n_src), size=len(row_cols))
            probs = (1.0 - noise) * probs + noise * distractor
        probs = probs / probs.sum(axis=1, keepdims=True)

        sid = f"s{si:0{id_width}d}"
        pair = SentencePair(id=sid, source=tuple(source), target=tuple(target),
                            gold_words=tuple(groups))
        records.append(AlignmentRecord(pair=pair, matrix=AlignmentMatrix(probs)))
        gold[sid] = tuple(groups)
    return records, gold, gold_lexicon


def temperature_sweep(config: SynthConfig, temps: Sequence[float]) -> RunSet:
    """One corpus per temperature, sharing everything but the matrices."""
    if not temps:
        raise ValueError("temperature grid must be non-empty")
    if any(b <= a for a, b in zip(temps, temps[1:])):
        raise ValueError(f"temperature grid must be strictly ascending, got {list(temps)!r}")
    runs = []
    labels = []
    for t in temps:
        corpus, _, _ = generate(dataclasses.replace(config, temperature=float(t)))
        runs.append(tuple(corpus))
        labels.append(f"T={t:g}")
    return RunSet(runs=tuple(runs), labels=tuple(labels))
