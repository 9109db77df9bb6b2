"""Command-line front-end for the full segmentation and evaluation pipeline.

Exit status: 0 on success, 1 on validation/data errors, 2 on usage errors.
Diagnostics go to stderr; results go to files or stdout.  Every subcommand
is a thin wrapper over the library, so outputs are byte-identical to
calling the library directly.
"""

from __future__ import annotations

import argparse
import dataclasses
import io
import json
import sys
from pathlib import Path
from typing import Sequence

from . import align_core, corpus_io, evaluate, lexicon, segmenter, synth
from .corpus_io import CorpusFormatError
from .segmenter import DEFAULT_SILENCE
from .synth import SynthConfig


@dataclasses.dataclass(frozen=True)
class CommandConfig:
    """Parsed invocation: one subcommand plus its inputs and options."""

    subcommand: str
    runs: tuple[Path, ...] = ()
    gold: Path | None = None
    seg: Path | None = None
    pairs: Path | None = None
    out: Path | None = None
    lexicon_out: Path | None = None
    silence_token: str = DEFAULT_SILENCE
    average: bool = False
    thresholds: tuple[float | str, ...] | None = None
    temps: tuple[float, ...] | None = None
    fmt: str = "text"
    by: str = "alignment"
    threshold: float | str | None = None
    direction: str = "ascending"
    limit: int | None = None
    synth_config: SynthConfig | None = None


class UsageError(Exception):
    """Bad flag combinations that argparse alone cannot catch."""


def parse_grid(spec: str, allow_all: bool = False) -> tuple:
    """Parse a grid like ``0.1:0.9:0.1,all`` into numeric cutoffs.

    Atoms are single numbers, ``start:stop:step`` ranges, or (when allowed)
    the literal ``all``.
    """
    out: list = []
    for atom in spec.split(","):
        atom = atom.strip()
        if not atom:
            raise UsageError(f"empty atom in grid {spec!r}")
        if atom == "all":
            if not allow_all:
                raise UsageError('"all" is not valid in this grid')
            out.append("all")
            continue
        if ":" in atom:
            parts = atom.split(":")
            if len(parts) != 3:
                raise UsageError(f"range must be start:stop:step, got {atom!r}")
            try:
                start, stop, step = (float(p) for p in parts)
            except ValueError as err:
                raise UsageError(f"bad number in range {atom!r}") from err
            if step <= 0 or stop < start:
                raise UsageError(f"range {atom!r} must have stop >= start and step > 0")
            count = int(round((stop - start) / step)) + 1
            vals = [round(start + i * step, 10) for i in range(count)]
            out.extend(v for v in vals if v <= stop + step * 1e-9)
        else:
            try:
                out.append(float(atom))
            except ValueError as err:
                raise UsageError(f"bad number {atom!r} in grid") from err
    return tuple(out)


def _format_threshold(t) -> str:
    return t if isinstance(t, str) else f"{t:g}"


def format_table(headers: Sequence[str], rows: Sequence[Sequence[str]], fmt: str) -> str:
    if fmt == "tsv":
        lines = ["\t".join(headers)]
        lines.extend("\t".join(row) for row in rows)
    else:
        widths = [len(h) for h in headers]
        for row in rows:
            widths = [max(w, len(cell)) for w, cell in zip(widths, row)]
        lines = ["  ".join(h.ljust(w) for h, w in zip(headers, widths)).rstrip()]
        lines.extend(
            "  ".join(cell.ljust(w) for cell, w in zip(row, widths)).rstrip() for row in rows
        )
    return "\n".join(lines) + "\n"


def _emit(text: str, out: Path | None) -> None:
    if out is None:
        sys.stdout.write(text)
    else:
        with open(out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)


def _load_corpus(cfg: CommandConfig) -> list[corpus_io.AlignmentRecord]:
    """Load the run files, averaging when asked; exactly one corpus comes back."""
    if len(cfg.runs) > 1 and not cfg.average:
        raise UsageError(
            f"{cfg.subcommand}: got {len(cfg.runs)} run files; pass --average to combine them"
        )
    if cfg.average:
        runs = corpus_io.load_runs(cfg.runs, cfg.silence_token)
        return align_core.average_runs(runs)
    return corpus_io.load_run(cfg.runs[0], cfg.silence_token)


def _cmd_validate(cfg: CommandConfig) -> int:
    runs = corpus_io.load_runs(cfg.runs, cfg.silence_token)
    n_gold = None
    if cfg.gold is not None:
        gold = corpus_io.load_gold(cfg.gold)
        for run in runs.runs:
            corpus_io.attach_gold(run, gold, cfg.silence_token)
        n_gold = len(gold)
    n = len(runs.runs[0])
    msg = f"ok: {n} sentences, {len(runs.runs)} run(s)"
    if n_gold is not None:
        msg += f", {n_gold} gold sentence(s)"
    sys.stdout.write(msg + "\n")
    return 0


def _cmd_average(cfg: CommandConfig) -> int:
    runs = corpus_io.load_runs(cfg.runs, cfg.silence_token)
    corpus_io.write_run(align_core.average_runs(runs), cfg.out)
    return 0


def _cmd_select_head(cfg: CommandConfig) -> int:
    runs = corpus_io.load_runs(cfg.runs, cfg.silence_token)
    idx, best = align_core.select_head(runs)
    rows = [
        [str(i), label, f"{align_core.corpus_ane(run):.6f}", "*" if i == idx else ""]
        for i, (label, run) in enumerate(zip(runs.labels, runs.runs))
    ]
    text = format_table(["head", "label", "corpus_ane", "selected"], rows, cfg.fmt)
    if cfg.fmt == "text":
        text += f"selected head {idx} (corpus ANE {best:.6f})\n"
    _emit(text, cfg.out)
    return 0


def _cmd_ane(cfg: CommandConfig) -> int:
    corpus = _load_corpus(cfg)
    reports = [align_core.sentence_ane(rec.matrix, rec.pair.id) for rec in corpus]
    value = align_core.corpus_ane(corpus)
    if cfg.out is None:
        buf = io.StringIO()
        corpus_io.write_ane_report(reports, value, buf)
        sys.stdout.write(buf.getvalue())
    else:
        corpus_io.write_ane_report(reports, value, cfg.out)
    return 0


def _cmd_segment(cfg: CommandConfig) -> int:
    corpus = _load_corpus(cfg)
    segs = segmenter.segment_corpus(corpus, cfg.silence_token)
    corpus_io.write_segmentation(segs, cfg.out)
    if cfg.lexicon_out is not None:
        _, pairs = lexicon.build_lexicon(segs)
        corpus_io.write_lexicon(pairs, cfg.lexicon_out)
    return 0


def _cmd_eval_boundary(cfg: CommandConfig) -> int:
    segs = corpus_io.read_segmentation(cfg.seg)
    gold = corpus_io.load_gold(cfg.gold)
    precision, recall, f_score, counts = evaluate.boundary_prf(segs, gold)
    rows = [[f"{100 * precision:.2f}", f"{100 * recall:.2f}", f"{100 * f_score:.2f}",
             str(counts.hits), str(counts.hyp_total), str(counts.gold_total)]]
    _emit(format_table(["precision", "recall", "f_score", "hits", "hyp_bounds", "gold_bounds"],
                       rows, cfg.fmt), cfg.out)
    return 0


def _cmd_eval_types(cfg: CommandConfig) -> int:
    pairs = corpus_io.read_lexicon(cfg.pairs)
    gold = corpus_io.load_gold(cfg.gold)
    gold_types = evaluate.gold_type_set(gold)
    threshold = cfg.threshold if cfg.threshold is not None else "all"
    if cfg.by == "type":
        discovered = lexicon.filter_types_by_ane(lexicon.types_from_pairs(pairs), threshold)
    else:
        discovered = lexicon.filter_by_ane(pairs, threshold)
    precision, recall, f_score = evaluate.type_prf(discovered, gold_types)
    rows = [[_format_threshold(threshold), f"{100 * precision:.2f}", f"{100 * recall:.2f}",
             f"{100 * f_score:.2f}", str(len(discovered)), str(len(gold_types))]]
    _emit(format_table(["threshold", "precision", "recall", "f_score", "discovered", "gold"],
                       rows, cfg.fmt), cfg.out)
    return 0


def _cmd_sweep_ane(cfg: CommandConfig) -> int:
    pairs = corpus_io.read_lexicon(cfg.pairs)
    gold_types = evaluate.gold_type_set(corpus_io.load_gold(cfg.gold))
    rows = evaluate.ane_sweep(pairs, gold_types, cfg.thresholds, by=cfg.by)
    cells = [[_format_threshold(r.threshold), f"{r.precision:.2f}", f"{r.recall:.2f}",
              f"{r.f_score:.2f}"] for r in rows]
    _emit(format_table(["threshold", "precision", "recall", "f_score"], cells, cfg.fmt), cfg.out)
    return 0


def _cmd_correlate(cfg: CommandConfig) -> int:
    runs = corpus_io.load_runs(cfg.runs, cfg.silence_token)
    gold = corpus_io.load_gold(cfg.gold)
    points = []
    for run in runs.runs:
        ane = align_core.corpus_ane(run)
        segs = segmenter.segment_corpus(run, cfg.silence_token)
        _, _, f_score, _ = evaluate.boundary_prf(segs, gold)
        points.append((ane, f_score))
    report = evaluate.correlate_runs(points)
    rows = [[label, f"{a:.6f}", f"{100 * f:.2f}"]
            for label, (a, f) in zip(runs.labels, report.points)]
    text = format_table(["run", "corpus_ane", "boundary_f"], rows, cfg.fmt)
    if cfg.fmt == "tsv":
        text += f"pearson_rho\t{report.rho:.6f}\n"
    else:
        text += f"pearson rho: {report.rho:.6f}\n"
    _emit(text, cfg.out)
    return 0


def _cmd_rank_types(cfg: CommandConfig) -> int:
    pairs = corpus_io.read_lexicon(cfg.pairs)
    ranked = lexicon.rank_types(pairs, direction=cfg.direction, limit=cfg.limit)
    rows = [[str(i + 1), " ".join(e.type_form), e.translation, f"{e.alignment_ane:.6f}",
             str(e.count)] for i, e in enumerate(ranked)]
    _emit(format_table(["rank", "type", "translation", "alignment_ane", "count"], rows, cfg.fmt),
          cfg.out)
    return 0


def _cmd_synth(cfg: CommandConfig) -> int:
    prefix = str(cfg.out)
    config = cfg.synth_config
    if cfg.temps is not None:
        runs = synth.temperature_sweep(config, cfg.temps)
        _, gold, _ = synth.generate(dataclasses.replace(config, temperature=float(cfg.temps[0])))
        written = []
        for label, run in zip(runs.labels, runs.runs):
            path = f"{prefix}.t{label.removeprefix('T=')}.run.jsonl"
            corpus_io.write_run(run, path)
            written.append(path)
    else:
        corpus, gold, _ = synth.generate(config)
        path = f"{prefix}.run.jsonl"
        corpus_io.write_run(corpus, path)
        written = [path]
    gold_path = f"{prefix}.gold.jsonl"
    corpus_io.write_gold(gold, gold_path)
    for path in [*written, gold_path]:
        sys.stdout.write(f"wrote {path}\n")
    return 0


_HANDLERS = {
    "validate": _cmd_validate,
    "average": _cmd_average,
    "select-head": _cmd_select_head,
    "ane": _cmd_ane,
    "segment": _cmd_segment,
    "eval-boundary": _cmd_eval_boundary,
    "eval-types": _cmd_eval_types,
    "sweep-ane": _cmd_sweep_ane,
    "correlate": _cmd_correlate,
    "rank-types": _cmd_rank_types,
    "synth": _cmd_synth,
}


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="aneseg",
        description="Unsupervised word segmentation and ANE confidence metrics "
                    "from soft-alignment matrices.",
    )
    sub = parser.add_subparsers(dest="subcommand", required=True, metavar="COMMAND")

    def add(name, help_text, *, runs=None, gold=False, gold_required=False, seg=False,
            pairs=False, out=False, out_required=False, fmt=False, silence=False):
        sp = sub.add_parser(name, help=help_text)
        if runs:
            sp.add_argument("--runs", nargs="+", required=True, type=Path,
                            help="alignment run file(s)")
        if gold or gold_required:
            sp.add_argument("--gold", type=Path, required=gold_required,
                            help="gold segmentation file")
        if seg:
            sp.add_argument("--seg", type=Path, required=True, help="segmentation file")
        if pairs:
            sp.add_argument("--pairs", type=Path, required=True,
                            help="lexicon TSV of (type, translation) pairs")
        if out or out_required:
            sp.add_argument("--out", type=Path, required=out_required, help="output path")
        if fmt:
            sp.add_argument("--format", dest="fmt", choices=("text", "tsv"), default="text")
        if silence:
            sp.add_argument("--silence-token", default=DEFAULT_SILENCE,
                            help="silence marker token (default %(default)s)")
        return sp

    add("validate", "parse and cross-check corpus files", runs=True, gold=True, silence=True)
    add("average", "element-wise mean of several runs' matrices",
        runs=True, out_required=True, silence=True)
    add("select-head", "pick the run/head with minimum corpus ANE",
        runs=True, out=True, fmt=True, silence=True)

    sp = add("ane", "per-sentence and corpus ANE report", runs=True, out=True, silence=True)
    sp.add_argument("--average", action="store_true", help="average the run matrices first")

    sp = add("segment", "segment phones into word tokens",
             runs=True, out_required=True, silence=True)
    sp.add_argument("--average", action="store_true", help="average the run matrices first")
    sp.add_argument("--lexicon-out", type=Path,
                    help="also write the discovered (type, translation) lexicon TSV")

    add("eval-boundary", "boundary precision/recall/F against gold",
        seg=True, gold_required=True, out=True, fmt=True)

    sp = add("eval-types", "type retrieval against the gold lexicon",
             pairs=True, gold_required=True, out=True, fmt=True)
    sp.add_argument("--threshold", default="all",
                    help='ANE cutoff in [0,1] or "all" (default: all)')
    sp.add_argument("--by", choices=("alignment", "type"), default="alignment",
                    help="filter on alignment-pair or type-level ANE")

    sp = add("sweep-ane", "type retrieval swept over ANE cutoffs",
             pairs=True, gold_required=True, out=True, fmt=True)
    sp.add_argument("--thresholds", required=True,
                    help='grid such as "0.1:0.9:0.1,all"')
    sp.add_argument("--by", choices=("alignment", "type"), default="alignment")

    add("correlate", "Pearson correlation of per-run corpus ANE vs boundary F",
        runs=True, gold_required=True, out=True, fmt=True, silence=True)

    sp = add("rank-types", "ANE-ranked (type, translation) listing",
             pairs=True, out=True, fmt=True)
    sp.add_argument("--direction", choices=("ascending", "descending"), default="ascending")
    sp.add_argument("--limit", type=int, default=None, help="keep only the first N entries")

    sp = add("synth", "generate a seeded synthetic corpus with gold", out_required=True)
    sp.add_argument("--silence-token", default=None,
                    help=f"silence marker token (default {DEFAULT_SILENCE})")
    sp.add_argument("--config", type=Path, help="JSON file of generator settings")
    sp.add_argument("--seed", type=int, default=None)
    sp.add_argument("--n-sentences", type=int, default=None)
    sp.add_argument("--source-vocab", type=int, default=None)
    sp.add_argument("--word-len", default=None, help="phones per word as MIN:MAX")
    sp.add_argument("--sent-len", default=None, help="words per sentence as MIN:MAX")
    sp.add_argument("--temperature", type=float, default=None)
    sp.add_argument("--noise", type=float, default=None, help="distractor mixing weight")
    sp.add_argument("--silence-prob", type=float, default=None)
    sp.add_argument("--ambiguous", action="store_true", default=None,
                    help="let distinct word types share translations")
    sp.add_argument("--temps", default=None,
                    help="temperature grid (one corpus per value), e.g. 0:4:0.5")
    return parser


def _parse_len_range(spec: str, flag: str) -> tuple[int, int]:
    parts = spec.split(":")
    if len(parts) != 2:
        raise UsageError(f"{flag} must be MIN:MAX, got {spec!r}")
    try:
        return int(parts[0]), int(parts[1])
    except ValueError as err:
        raise UsageError(f"{flag} must be MIN:MAX integers, got {spec!r}") from err


def _synth_config(args: argparse.Namespace) -> SynthConfig:
    settings: dict = {}
    if args.config is not None:
        try:
            with open(args.config, encoding="utf-8") as fh:
                loaded = json.load(fh)
        except json.JSONDecodeError as err:
            raise CorpusFormatError(f"invalid JSON ({err.msg})", path=args.config,
                                    line=err.lineno) from err
        if not isinstance(loaded, dict):
            raise CorpusFormatError("config must be a JSON object", path=args.config)
        known = {f.name for f in dataclasses.fields(SynthConfig)}
        unknown = set(loaded) - known
        if unknown:
            raise CorpusFormatError(f"unknown config keys {sorted(unknown)}", path=args.config)
        settings.update(loaded)
    for key, value in (
        ("seed", args.seed),
        ("n_sentences", args.n_sentences),
        ("source_vocab", args.source_vocab),
        ("temperature", args.temperature),
        ("distractor_noise", args.noise),
        ("silence_prob", args.silence_prob),
        ("silence_token", getattr(args, "silence_token", None)),
        ("ambiguous", args.ambiguous),
    ):
        if value is not None:
            settings[key] = value
    if args.word_len is not None:
        settings["word_len_range"] = _parse_len_range(args.word_len, "--word-len")
    if args.sent_len is not None:
        settings["sent_len_range"] = _parse_len_range(args.sent_len, "--sent-len")
    for key in ("word_len_range", "sent_len_range"):
        if key in settings:
            settings[key] = tuple(settings[key])
    return SynthConfig(**settings)


def _config_from_args(args: argparse.Namespace) -> CommandConfig:
    kwargs = dict(subcommand=args.subcommand)
    if hasattr(args, "runs"):
        kwargs["runs"] = tuple(args.runs)
    for name in ("gold", "seg", "pairs", "out", "lexicon_out", "fmt", "by",
                 "direction", "limit", "average"):
        if hasattr(args, name):
            kwargs[name] = getattr(args, name)
    if getattr(args, "silence_token", None) is not None:
        kwargs["silence_token"] = args.silence_token
    if getattr(args, "threshold", None) is not None:
        raw = args.threshold
        if raw != "all":
            try:
                kwargs["threshold"] = float(raw)
            except ValueError as err:
                raise UsageError(f'--threshold must be a number or "all", got {raw!r}') from err
        else:
            kwargs["threshold"] = "all"
    if getattr(args, "thresholds", None) is not None:
        kwargs["thresholds"] = parse_grid(args.thresholds, allow_all=True)
    if getattr(args, "temps", None) is not None:
        grid = parse_grid(args.temps, allow_all=False)
        kwargs["temps"] = tuple(float(t) for t in grid)
    if args.subcommand == "synth":
        kwargs["synth_config"] = _synth_config(args)
    return CommandConfig(**kwargs)


def run(argv: Sequence[str]) -> int:
    """Parse arguments, dispatch, and map errors to exit codes."""
    parser = _build_parser()
    try:
        args = parser.parse_args(list(argv))
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        cfg = _config_from_args(args)
        return _HANDLERS[cfg.subcommand](cfg)
    except UsageError as err:
        sys.stderr.write(f"aneseg: usage error: {err}\n")
        return 2
    except (CorpusFormatError, ValueError, OSError) as err:
        sys.stderr.write(f"aneseg: error: {err}\n")
        return 1


def main() -> int:
    return run(sys.argv[1:])
