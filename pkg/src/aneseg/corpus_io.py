"""Line-oriented corpus formats: alignment runs, gold segmentations, outputs.

All files are UTF-8.  Run and gold files are line-delimited JSON objects;
segmentation output adds a fixed header line; lexicons are TSV.  Floats are
written with 6 decimal digits, and writers impose a stable ordering, so
identical inputs always produce byte-identical files.  Malformed input
always raises `CorpusFormatError` naming the file, line and sentence id.
"""

from __future__ import annotations

import dataclasses
import json
from pathlib import Path
from typing import Iterable, Mapping, Sequence

import numpy as np

from .align_core import AlignmentMatrix
from .segmenter import DEFAULT_SILENCE, Segmentation, Token

GoldWords = tuple[tuple[str, ...], ...]

SEGMENTATION_HEADER = '{"format": "aneseg-segmentation", "version": 1}'
LEXICON_HEADER = "type\ttranslation\tcount\talignment_ane"


class CorpusFormatError(ValueError):
    """Malformed corpus data, with file/line/sentence context in the message."""

    def __init__(self, message: str, *, path=None, line: int | None = None,
                 sentence_id: str | None = None):
        parts = []
        if path is not None:
            parts.append(str(path))
        if line is not None:
            parts.append(f"line {line}")
        if sentence_id is not None:
            parts.append(f"id {sentence_id!r}")
        prefix = ", ".join(parts)
        super().__init__(f"{prefix}: {message}" if prefix else message)
        self.path = path
        self.line = line
        self.sentence_id = sentence_id


@dataclasses.dataclass(frozen=True)
class SentencePair:
    """A source word sequence paired with a target phone sequence.

    ``target`` may contain silence markers; ``gold_words`` (if present)
    groups the non-silence phones into reference words.
    """

    id: str
    source: tuple[str, ...]
    target: tuple[str, ...]
    gold_words: GoldWords | None = None

    def __post_init__(self):
        if not self.id:
            raise ValueError("sentence id must be non-empty")
        if not self.source:
            raise ValueError(f"id {self.id!r}: source must be non-empty")
        if not self.target:
            raise ValueError(f"id {self.id!r}: target must be non-empty")


@dataclasses.dataclass(frozen=True)
class AlignmentRecord:
    """One sentence pair plus its soft-alignment matrix."""

    pair: SentencePair
    matrix: AlignmentMatrix


@dataclasses.dataclass(frozen=True)
class RunSet:
    """Aligned corpora from several training runs or attention heads."""

    runs: tuple[tuple[AlignmentRecord, ...], ...]
    labels: tuple[str, ...]

    def __post_init__(self):
        if not self.runs:
            raise ValueError("RunSet needs at least one run")
        if len(self.labels) != len(self.runs):
            raise ValueError(
                f"{len(self.runs)} runs but {len(self.labels)} labels"
            )
        first = self.runs[0]
        ids = [rec.pair.id for rec in first]
        for label, run in zip(self.labels[1:], self.runs[1:]):
            run_ids = [rec.pair.id for rec in run]
            if run_ids != ids:
                raise ValueError(f"run {label!r}: sentence ids do not match run {self.labels[0]!r}")
            for ref, rec in zip(first, run):
                if rec.pair.source != ref.pair.source or rec.pair.target != ref.pair.target:
                    raise ValueError(
                        f"run {label!r}, id {rec.pair.id!r}: source/target differ between runs"
                    )
                if rec.matrix.shape != ref.matrix.shape:
                    raise ValueError(
                        f"run {label!r}, id {rec.pair.id!r}: matrix shape "
                        f"{rec.matrix.shape} != {ref.matrix.shape}"
                    )


def non_silence(target: Sequence[str], silence_token: str = DEFAULT_SILENCE) -> tuple[str, ...]:
    """Target phones with all silence markers removed."""
    return tuple(t for t in target if t != silence_token)


def _check_token(tok, what: str) -> str:
    if not isinstance(tok, str) or not tok:
        raise ValueError(f"{what} must be a non-empty string, got {tok!r}")
    if what == "phone" and any(c.isspace() for c in tok):
        raise ValueError(f"phone {tok!r} must not contain whitespace")
    if "\t" in tok or "\n" in tok:
        raise ValueError(f"{what} {tok!r} must not contain tabs or newlines")
    return tok


def _iter_jsonl(path):
    with open(path, encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.rstrip("\n")
            if not line.strip():
                raise CorpusFormatError("blank line", path=path, line=lineno)
            try:
                obj = json.loads(line)
            except json.JSONDecodeError as err:
                raise CorpusFormatError(f"invalid JSON ({err.msg})", path=path, line=lineno) from err
            if not isinstance(obj, dict):
                raise CorpusFormatError("record must be a JSON object", path=path, line=lineno)
            yield lineno, obj


def _require(obj: dict, key: str, path, lineno: int):
    if key not in obj:
        raise CorpusFormatError(f"missing field {key!r}", path=path, line=lineno,
                                sentence_id=obj.get("id") if key != "id" else None)
    return obj[key]


def _string_list(value, what: str, path, lineno: int, sentence_id: str) -> tuple[str, ...]:
    if not isinstance(value, list) or not value:
        raise CorpusFormatError(f"{what} must be a non-empty array", path=path,
                                line=lineno, sentence_id=sentence_id)
    try:
        return tuple(_check_token(tok, "phone" if what == "target" else "word") for tok in value)
    except ValueError as err:
        raise CorpusFormatError(f"{what}: {err}", path=path, line=lineno,
                                sentence_id=sentence_id) from err


def load_run(path, silence_token: str = DEFAULT_SILENCE) -> list[AlignmentRecord]:
    """Parse and validate one alignment run file, preserving record order."""
    records: list[AlignmentRecord] = []
    seen: set[str] = set()
    for lineno, obj in _iter_jsonl(path):
        sid = _require(obj, "id", path, lineno)
        if not isinstance(sid, str) or not sid:
            raise CorpusFormatError("id must be a non-empty string", path=path, line=lineno)
        if sid in seen:
            raise CorpusFormatError("duplicate sentence id", path=path, line=lineno,
                                    sentence_id=sid)
        seen.add(sid)
        source = _string_list(_require(obj, "source", path, lineno), "source", path, lineno, sid)
        target = _string_list(_require(obj, "target", path, lineno), "target", path, lineno, sid)
        phones = non_silence(target, silence_token)
        if not phones:
            raise CorpusFormatError("target has no non-silence phones", path=path,
                                    line=lineno, sentence_id=sid)
        matrix_rows = _require(obj, "matrix", path, lineno)
        if not isinstance(matrix_rows, list) or len(matrix_rows) != len(phones):
            got = len(matrix_rows) if isinstance(matrix_rows, list) else "non-array"
            raise CorpusFormatError(
                f"matrix has {got} rows but target has {len(phones)} non-silence phones",
                path=path, line=lineno, sentence_id=sid)
        for r, row in enumerate(matrix_rows):
            if not isinstance(row, list) or len(row) != len(source):
                got = len(row) if isinstance(row, list) else "non-array"
                raise CorpusFormatError(
                    f"matrix row {r} has {got} columns but source has {len(source)} words",
                    path=path, line=lineno, sentence_id=sid)
            for v in row:
                if isinstance(v, bool) or not isinstance(v, (int, float)):
                    raise CorpusFormatError(f"matrix row {r}: non-numeric entry {v!r}",
                                            path=path, line=lineno, sentence_id=sid)
        try:
            matrix = AlignmentMatrix(matrix_rows)
        except ValueError as err:
            raise CorpusFormatError(f"matrix {err}", path=path, line=lineno,
                                    sentence_id=sid) from err
        records.append(AlignmentRecord(pair=SentencePair(sid, source, target), matrix=matrix))
    return records


def load_runs(paths: Sequence, silence_token: str = DEFAULT_SILENCE) -> RunSet:
    """Load several run files into a consistency-checked `RunSet`."""
    runs = tuple(tuple(load_run(p, silence_token)) for p in paths)
    labels = tuple(Path(p).name for p in paths)
    return RunSet(runs=runs, labels=labels)


def load_gold(path) -> dict[str, GoldWords]:
    """Parse a gold segmentation file into an id -> word-groupings mapping."""
    gold: dict[str, GoldWords] = {}
    for lineno, obj in _iter_jsonl(path):
        sid = _require(obj, "id", path, lineno)
        if not isinstance(sid, str) or not sid:
            raise CorpusFormatError("id must be a non-empty string", path=path, line=lineno)
        if sid in gold:
            raise CorpusFormatError("duplicate sentence id", path=path, line=lineno,
                                    sentence_id=sid)
        words = _require(obj, "words", path, lineno)
        if not isinstance(words, list) or not words:
            raise CorpusFormatError("words must be a non-empty array", path=path,
                                    line=lineno, sentence_id=sid)
        groups = []
        for g, group in enumerate(words):
            if not isinstance(group, list) or not group:
                raise CorpusFormatError(f"word {g} is empty", path=path, line=lineno,
                                        sentence_id=sid)
            try:
                groups.append(tuple(_check_token(p, "phone") for p in group))
            except ValueError as err:
                raise CorpusFormatError(f"word {g}: {err}", path=path, line=lineno,
                                        sentence_id=sid) from err
        gold[sid] = tuple(groups)
    return gold


def attach_gold(
    corpus: Iterable[AlignmentRecord],
    gold: Mapping[str, GoldWords],
    silence_token: str = DEFAULT_SILENCE,
) -> list[AlignmentRecord]:
    """Attach gold word groupings to matching records.

    For every record with gold, the concatenated groupings must equal the
    silence-free target.  Records without gold are passed through.
    """
    out = []
    for rec in corpus:
        words = gold.get(rec.pair.id)
        if words is None:
            out.append(rec)
            continue
        flat = tuple(p for group in words for p in group)
        phones = non_silence(rec.pair.target, silence_token)
        if flat != phones:
            raise CorpusFormatError(
                "gold words do not concatenate to the silence-free target",
                sentence_id=rec.pair.id)
        out.append(dataclasses.replace(rec, pair=dataclasses.replace(rec.pair, gold_words=words)))
    return out


def _f6(x: float) -> str:
    return f"{float(x) + 0.0:.6f}"


def _jstr(s: str) -> str:
    return json.dumps(s, ensure_ascii=False)


def _jstrings(tokens: Iterable[str]) -> str:
    return "[" + ", ".join(_jstr(t) for t in tokens) + "]"


def _open_out(path):
    return open(path, "w", encoding="utf-8", newline="\n")


def write_run(records: Iterable[AlignmentRecord], path) -> None:
    """Write an alignment run file, preserving record order."""
    with _open_out(path) as fh:
        for rec in records:
            matrix = "[" + ", ".join(
                "[" + ", ".join(_f6(v) for v in row) + "]"
                for row in rec.matrix.probs.tolist()
            ) + "]"
            fh.write(
                f'{{"id": {_jstr(rec.pair.id)}, '
                f'"source": {_jstrings(rec.pair.source)}, '
                f'"target": {_jstrings(rec.pair.target)}, '
                f'"matrix": {matrix}}}\n'
            )


def write_gold(gold: Mapping[str, GoldWords], path) -> None:
    """Write a gold segmentation file, sorted by sentence id."""
    with _open_out(path) as fh:
        for sid in sorted(gold):
            words = "[" + ", ".join(_jstrings(g) for g in gold[sid]) + "]"
            fh.write(f'{{"id": {_jstr(sid)}, "words": {words}}}\n')


def write_segmentation(segmentations: Iterable[Segmentation], path) -> None:
    """Write segmentations sorted by sentence id, header line first."""
    with _open_out(path) as fh:
        fh.write(SEGMENTATION_HEADER + "\n")
        for seg in sorted(segmentations, key=lambda s: s.id):
            tokens = ", ".join(
                f'{{"phones": {_jstrings(tok.phones)}, '
                f'"span": [{tok.span[0]}, {tok.span[1]}], '
                f'"aligned_word": {_jstr(tok.aligned_word)}, '
                f'"aligned_word_index": {tok.aligned_word_index}, '
                f'"token_ane": {_f6(tok.token_ane)}}}'
                for tok in seg.tokens
            )
            fh.write(f'{{"id": {_jstr(seg.id)}, "tokens": [{tokens}]}}\n')


def read_segmentation(path) -> list[Segmentation]:
    """Read a segmentation file back into `Segmentation` objects."""
    segs: list[Segmentation] = []
    seen: set[str] = set()
    with open(path, encoding="utf-8") as fh:
        header = fh.readline().rstrip("\n")
        if header != SEGMENTATION_HEADER:
            raise CorpusFormatError("missing or unknown segmentation header", path=path, line=1)
        for lineno, raw in enumerate(fh, start=2):
            line = raw.rstrip("\n")
            if not line.strip():
                raise CorpusFormatError("blank line", path=path, line=lineno)
            try:
                obj = json.loads(line)
            except json.JSONDecodeError as err:
                raise CorpusFormatError(f"invalid JSON ({err.msg})", path=path,
                                        line=lineno) from err
            sid = _require(obj, "id", path, lineno)
            if sid in seen:
                raise CorpusFormatError("duplicate sentence id", path=path, line=lineno,
                                        sentence_id=sid)
            seen.add(sid)
            raw_tokens = _require(obj, "tokens", path, lineno)
            if not isinstance(raw_tokens, list) or not raw_tokens:
                raise CorpusFormatError("tokens must be a non-empty array", path=path,
                                        line=lineno, sentence_id=sid)
            tokens = []
            cursor = 0
            for t in raw_tokens:
                try:
                    span = (int(t["span"][0]), int(t["span"][1]))
                    tok = Token(
                        phones=tuple(t["phones"]),
                        span=span,
                        aligned_word_index=int(t["aligned_word_index"]),
                        aligned_word=t["aligned_word"],
                        token_ane=float(t["token_ane"]),
                    )
                except (KeyError, TypeError, IndexError, ValueError) as err:
                    raise CorpusFormatError(f"malformed token: {err}", path=path,
                                            line=lineno, sentence_id=sid) from err
                if tok.span[0] != cursor or tok.span[1] - tok.span[0] != len(tok.phones) \
                        or not tok.phones:
                    raise CorpusFormatError(
                        f"token span {tok.span} does not tile the phone sequence",
                        path=path, line=lineno, sentence_id=sid)
                cursor = tok.span[1]
                tokens.append(tok)
            bounds = frozenset(tok.span[0] for tok in tokens[1:])
            segs.append(Segmentation(id=sid, tokens=tuple(tokens), boundary_set=bounds))
    return segs


def write_lexicon(pairs: Iterable, path) -> None:
    """Write (type, translation) pairs as TSV, ascending by ANE then lexicographic."""
    rows = sorted(pairs, key=lambda e: (e.alignment_ane, e.type_form, e.translation))
    with _open_out(path) as fh:
        fh.write(LEXICON_HEADER + "\n")
        for e in rows:
            fh.write(f"{' '.join(e.type_form)}\t{e.translation}\t{e.count}\t{_f6(e.alignment_ane)}\n")


def read_lexicon(path) -> list:
    """Read a lexicon TSV back into `AlignmentEntry` objects."""
    from .lexicon import AlignmentEntry

    entries = []
    with open(path, encoding="utf-8") as fh:
        header = fh.readline().rstrip("\n")
        if header != LEXICON_HEADER:
            raise CorpusFormatError("missing or unknown lexicon header", path=path, line=1)
        for lineno, raw in enumerate(fh, start=2):
            line = raw.rstrip("\n")
            cols = line.split("\t")
            if len(cols) != 4:
                raise CorpusFormatError(f"expected 4 tab-separated columns, got {len(cols)}",
                                        path=path, line=lineno)
            type_form = tuple(cols[0].split(" "))
            if not all(type_form):
                raise CorpusFormatError("empty phone in type column", path=path, line=lineno)
            try:
                count = int(cols[2])
                ane = float(cols[3])
            except ValueError as err:
                raise CorpusFormatError(f"bad numeric column: {err}", path=path,
                                        line=lineno) from err
            if count < 1:
                raise CorpusFormatError(f"count must be >= 1, got {count}", path=path, line=lineno)
            if not 0.0 <= ane <= 1.0:
                raise CorpusFormatError(f"alignment_ane {ane} outside [0, 1]", path=path,
                                        line=lineno)
            entries.append(AlignmentEntry(type_form=type_form, translation=cols[1],
                                          count=count, alignment_ane=ane))
    return entries


def write_ane_report(reports: Iterable, corpus_value: float, path_or_file) -> None:
    """Write per-sentence ANE records (sorted by id) plus a corpus summary line."""
    def _emit(fh):
        for rep in sorted(reports, key=lambda r: r.id):
            per_phone = "[" + ", ".join(_f6(v) for v in rep.per_phone) + "]"
            fh.write(f'{{"id": {_jstr(rep.id)}, "sentence_ane": {_f6(rep.sentence_ane)}, '
                     f'"per_phone": {per_phone}}}\n')
        fh.write(f'{{"corpus_ane": {_f6(corpus_value)}}}\n')

    if hasattr(path_or_file, "write"):
        _emit(path_or_file)
    else:
        with _open_out(path_or_file) as fh:
            _emit(fh)
