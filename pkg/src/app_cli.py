"""
Singing Pronunciation Analysis CLI

Subcommands:
    analyze  per-phoneme confidence, confusion sets and category matrix
    adapt    add singing pronunciation variants to a CMU-format lexicon
    score    word / character error rates with S/I/D breakdowns
    align    dump alignment paths for debugging

Exit status: 0 on success, 1 on data errors, 2 on usage errors.
"""

import argparse
import os
import sys
from dataclasses import dataclass
from typing import Callable, Dict, FrozenSet, List, Optional, Sequence

from dotenv import load_dotenv

from AnalysisSchema import (AdaptationReportModel, AlignmentModel, AlignmentReportModel, AnalysisReportModel,
                            CategoryMatrixModel, ConfidenceRowModel, ErrorReportModel, InsertionCountModel,
                            ReportComparisonModel, ScoreReportModel)
from AnalysisService import AlignmentLevel, AnalysisService, ServiceConfig
from errors import PronunciationAnalysisError
from ErrorScoring import read_transcripts
from formatters import (alignments_csv, category_matrix_csv, confidence_table_csv, error_reports_csv,
                        format_adaptation_summary, format_alignments, format_category_confidence,
                        format_category_matrix, format_comparisons, format_confidence_table,
                        format_error_reports, format_insertions)
from Lexicon import OovPolicy, read_lexicon, serialize_lexicon
from LexiconAdapter import DEFAULT_DROP_FINALS, DEFAULT_MAX_VOWEL_REPEAT, AdaptationConfig, AdaptationMode
from logger import get_logger
from PhoneSet import PhoneSet, default_phone_set, load_phone_set
from Utils import matrix_csv_path, write_output

load_dotenv()

logger = get_logger("cli")

EXIT_OK = 0
EXIT_DATA_ERROR = 1
EXIT_USAGE_ERROR = 2

FORMATS = ("text", "csv", "json")


class UsageError(Exception):
    """Invalid invocation: bad flag values or missing input files."""


@dataclass
class RunConfig:
    """One parsed CLI invocation"""
    subcommand: str
    format: str = "text"
    out: Optional[str] = None
    phoneset: Optional[str] = None
    lexicon: Optional[str] = None
    hyp: Optional[str] = None
    ref: Optional[str] = None
    hyp_phones: Optional[str] = None
    ref_phones: Optional[str] = None
    baseline_hyp: Optional[str] = None
    oov: OovPolicy = OovPolicy.SKIP
    topn: Optional[int] = None
    workers: Optional[int] = None
    suggest_finals: int = 0
    mode: AdaptationMode = AdaptationMode.COMBINED
    drop_finals: Optional[str] = None
    max_vowel_repeat: int = DEFAULT_MAX_VOWEL_REPEAT
    cross_compose: bool = True
    tag_variants: bool = False
    include_insertions: bool = True
    level: AlignmentLevel = AlignmentLevel.TOKEN
    utterance: Optional[str] = None

    @classmethod
    def from_args(cls, args: argparse.Namespace) -> "RunConfig":
        return cls(
            subcommand=args.subcommand,
            format=args.format,
            out=args.out,
            phoneset=args.phoneset or os.getenv("PRON_PHONESET") or None,
            lexicon=getattr(args, "lexicon", None),
            hyp=getattr(args, "hyp", None),
            ref=getattr(args, "ref", None),
            hyp_phones=getattr(args, "hyp_phones", None),
            ref_phones=getattr(args, "ref_phones", None),
            baseline_hyp=getattr(args, "baseline_hyp", None),
            oov=OovPolicy(args.oov),
            topn=getattr(args, "topn", None),
            workers=args.workers,
            suggest_finals=getattr(args, "suggest_finals", 0),
            mode=AdaptationMode(getattr(args, "mode", AdaptationMode.COMBINED.value)),
            drop_finals=getattr(args, "drop_finals", None),
            max_vowel_repeat=getattr(args, "max_vowel_repeat", DEFAULT_MAX_VOWEL_REPEAT),
            cross_compose=not getattr(args, "no_cross_compose", False),
            tag_variants=getattr(args, "tag_variants", False),
            include_insertions=not getattr(args, "exclude_insertions", False),
            level=AlignmentLevel(getattr(args, "level", AlignmentLevel.TOKEN.value)),
            utterance=getattr(args, "utt", None),
        )

    def input_paths(self) -> List[str]:
        paths = [self.phoneset, self.lexicon, self.hyp, self.ref, self.hyp_phones, self.ref_phones, self.baseline_hyp]
        return [path for path in paths if path]

    def validate(self) -> "RunConfig":
        for path in self.input_paths():
            if not os.path.isfile(path):
                raise UsageError(f"input file not found: {path}")
        if self.topn is not None and self.topn < 1:
            raise UsageError("--topn must be at least 1")
        if self.workers is not None and self.workers < 1:
            raise UsageError("--workers must be at least 1")
        if self.suggest_finals < 0:
            raise UsageError("--suggest-finals must not be negative")
        if self.max_vowel_repeat < 1:
            raise UsageError("--max-vowel-repeat must be at least 1")
        if self.subcommand == "adapt" and self.format == "csv":
            raise UsageError("adapt supports --format text or json")
        if self.subcommand == "score":
            if self.hyp_phones and not self.ref_phones:
                raise UsageError("--hyp-phones requires --ref-phones")
            if self.ref_phones and not (self.hyp_phones or self.lexicon):
                raise UsageError("--ref-phones requires --hyp-phones or --lexicon")
        return self

    def finals(self, phone_set: PhoneSet) -> FrozenSet[str]:
        """`--drop-finals` as validated phone-set symbols; the default set when the flag is absent."""
        if self.drop_finals is None:
            return DEFAULT_DROP_FINALS
        tokens = [token for token in self.drop_finals.split(",") if token.strip()]
        return frozenset(phone_set.normalize_symbol(token) for token in tokens)


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--phoneset", help="phone-set file (default: PRON_PHONESET or the built-in CMU 39 set)")
    common.add_argument("--format", choices=FORMATS, default="text", help="output format")
    common.add_argument("--out", help="output path (default: stdout)")
    common.add_argument("--oov", choices=[policy.value for policy in OovPolicy], default=OovPolicy.SKIP.value,
                        help="out-of-vocabulary handling during phonemization")
    common.add_argument("--workers", type=int, help="alignment worker threads (default: PRON_WORKERS or 1); "
                        "the alignment is pure Python, so threads do not run it in parallel")

    parser = argparse.ArgumentParser(prog="app_cli.py", description="Pronunciation analysis for sung utterances")
    subparsers = parser.add_subparsers(dest="subcommand", required=True)

    analyze = subparsers.add_parser("analyze", parents=[common], help="phoneme confidence and confusion analysis")
    analyze.add_argument("--hyp", required=True, help="recognized phoneme transcripts (word transcripts with --lexicon)")
    analyze.add_argument("--ref", required=True, help="reference phoneme transcripts")
    analyze.add_argument("--lexicon", help="phonemize --hyp word transcripts through this lexicon")
    analyze.add_argument("--topn", type=int, help="confusion set size (default: PRON_TOPN or 3)")
    analyze.add_argument("--suggest-finals", type=int, default=0, metavar="K",
                         help="report the K lowest-confidence consonants as drop-final candidates")

    adapt = subparsers.add_parser("adapt", parents=[common], help="add singing pronunciation variants")
    adapt.add_argument("--lexicon", required=True, help="CMU-format lexicon")
    adapt.add_argument("--mode", choices=[mode.value for mode in AdaptationMode],
                       default=AdaptationMode.COMBINED.value, help="l1 consonant drop, l2 vowel extension, l3 both")
    adapt.add_argument("--drop-finals", help="comma-separated final consonants to drop (default: D,T,DH,Z)")
    adapt.add_argument("--max-vowel-repeat", type=int, default=DEFAULT_MAX_VOWEL_REPEAT)
    adapt.add_argument("--no-cross-compose", action="store_true",
                       help="in l3, do not extend vowels of consonant-dropped variants")
    adapt.add_argument("--tag-variants", action="store_true", help="annotate each line with its variant origin")

    score = subparsers.add_parser("score", parents=[common], help="word and character error rates")
    score.add_argument("--hyp", required=True, help="recognized word transcripts")
    score.add_argument("--ref", required=True, help="reference word transcripts")
    score.add_argument("--lexicon", help="lexicon for the drop-final word subset and phonemization")
    score.add_argument("--drop-finals", help="finals defining the word subset (default: D,T,DH,Z)")
    score.add_argument("--hyp-phones", help="recognized phoneme transcripts for vowel/consonant reports")
    score.add_argument("--ref-phones", help="reference phoneme transcripts for vowel/consonant reports")
    score.add_argument("--baseline-hyp", help="word transcripts of a baseline system to compare against")
    score.add_argument("--exclude-insertions", action="store_true", help="leave insertions out of every report")

    align_cmd = subparsers.add_parser("align", parents=[common], help="dump alignment paths")
    align_cmd.add_argument("--hyp", required=True)
    align_cmd.add_argument("--ref", required=True)
    align_cmd.add_argument("--level", choices=[level.value for level in AlignmentLevel],
                           default=AlignmentLevel.TOKEN.value)
    align_cmd.add_argument("--utt", help="only this utterance id")

    return parser


# ==================== SUBCOMMANDS ====================

def cmd_analyze(cfg: RunConfig, service: AnalysisService):
    hyps = read_transcripts(cfg.hyp)
    refs = read_transcripts(cfg.ref)
    if cfg.lexicon:
        hyps = service.phonemize_utterances(hyps, read_lexicon(cfg.lexicon, service.phone_set))

    result = service.analyze(hyps, refs, cfg.topn, cfg.suggest_finals).payload

    if cfg.format == "json":
        model = AnalysisReportModel(
            utterances=result.utterances,
            confusion_set_size=result.topn,
            rows=[ConfidenceRowModel.from_row(row) for row in result.rows],
            category_matrix=CategoryMatrixModel.from_matrix(result.matrix),
            category_confidence={category.value: value for category, value in result.category_confidence.items()},
            top_insertions=[InsertionCountModel(phoneme=p, count=c) for p, c in result.top_insertions],
            suggested_drop_finals=list(result.suggested_drop_finals),
        )
        write_output(model.model_dump_json(indent=2), cfg.out)
    elif cfg.format == "csv":
        table = confidence_table_csv(result.rows)
        matrix = category_matrix_csv(result.matrix)
        if cfg.out:
            write_output(table, cfg.out)
            write_output(matrix, matrix_csv_path(cfg.out))
        else:
            write_output(table + "\n" + matrix)
    else:
        sections = [
            f"Phoneme confidence ({result.utterances} utterances, confusion set size {result.topn})\n"
            + format_confidence_table(result.rows),
            "Category confusion matrix (rows: ground truth, columns: prediction)\n"
            + format_category_matrix(result.matrix),
            "Mean confidence per category\n" + format_category_confidence(result.category_confidence),
            "Most inserted phonemes\n" + format_insertions(result.top_insertions),
        ]
        if result.suggested_drop_finals:
            sections.append(f"Suggested drop finals: {','.join(result.suggested_drop_finals)}\n")
        write_output("\n".join(sections), cfg.out)


def cmd_adapt(cfg: RunConfig, service: AnalysisService):
    lexicon = read_lexicon(cfg.lexicon, service.phone_set)
    adaptation = AdaptationConfig(
        drop_finals=cfg.finals(service.phone_set),
        max_vowel_repeat=cfg.max_vowel_repeat,
        mode=cfg.mode,
        cross_compose=cfg.cross_compose,
    )
    result = service.adapt(lexicon, adaptation).payload
    summary = format_adaptation_summary(result.summary)
    logger.info(summary)

    if cfg.format == "json":
        model = AdaptationReportModel.from_adaptation(adaptation, result.summary, result.lexicon)
        write_output(model.model_dump_json(indent=2), cfg.out)
    else:
        write_output(serialize_lexicon(result.lexicon, cfg.tag_variants), cfg.out)
        print(summary, file=sys.stderr)


def cmd_score(cfg: RunConfig, service: AnalysisService):
    hyps = read_transcripts(cfg.hyp)
    refs = read_transcripts(cfg.ref)
    lexicon = read_lexicon(cfg.lexicon, service.phone_set) if cfg.lexicon else None
    hyp_phones = read_transcripts(cfg.hyp_phones) if cfg.hyp_phones else None
    ref_phones = read_transcripts(cfg.ref_phones) if cfg.ref_phones else None
    baseline = read_transcripts(cfg.baseline_hyp) if cfg.baseline_hyp else None

    result = service.score(hyps, refs, lexicon, cfg.finals(service.phone_set), hyp_phones, ref_phones,
                           baseline, cfg.include_insertions).payload

    if cfg.format == "json":
        model = ScoreReportModel(
            include_insertions=result.include_insertions,
            reports=[ErrorReportModel.from_report(name, report) for name, report in result.reports.items()],
            baseline=[ErrorReportModel.from_report(name, report) for name, report in result.baseline.items()],
            comparisons=[ReportComparisonModel.from_comparison(name, comparison)
                         for name, comparison in result.comparisons.items()],
        )
        write_output(model.model_dump_json(indent=2), cfg.out)
    elif cfg.format == "csv":
        rows = dict(result.reports)
        rows.update((f"baseline_{name}", report) for name, report in result.baseline.items())
        write_output(error_reports_csv(rows), cfg.out)
    else:
        note = "" if result.include_insertions else " (insertions excluded)"
        sections = [f"Error rates{note}\n" + format_error_reports(result.reports)]
        if result.baseline:
            sections.append("Baseline error rates\n" + format_error_reports(result.baseline))
            sections.append("Error rate reduction (baseline - system)\n" + format_comparisons(result.comparisons))
        write_output("\n".join(sections), cfg.out)


def cmd_align(cfg: RunConfig, service: AnalysisService):
    hyps = read_transcripts(cfg.hyp)
    refs = read_transcripts(cfg.ref)
    alignments = service.align(hyps, refs, cfg.level, cfg.utterance).payload
    if cfg.utterance is not None and not alignments:
        raise PronunciationAnalysisError(f"utterance '{cfg.utterance}' not found")

    if cfg.format == "json":
        model = AlignmentReportModel(alignments=[AlignmentModel.from_path(utt_id, cfg.level.value, path)
                                                 for utt_id, path in alignments])
        write_output(model.model_dump_json(indent=2), cfg.out)
    elif cfg.format == "csv":
        write_output(alignments_csv(alignments), cfg.out)
    else:
        write_output(format_alignments(alignments), cfg.out)


COMMANDS: Dict[str, Callable[[RunConfig, AnalysisService], None]] = {
    "analyze": cmd_analyze,
    "adapt": cmd_adapt,
    "score": cmd_score,
    "align": cmd_align,
}


def _fail(error: Exception, status: int) -> int:
    logger.error(f"{type(error).__name__}: {error}")
    print(f"Error: {error}", file=sys.stderr)
    return status


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        # argparse exits 2 on usage errors and 0 for --help
        return e.code if isinstance(e.code, int) else EXIT_USAGE_ERROR

    try:
        cfg = RunConfig.from_args(args).validate()
        phone_set = load_phone_set(cfg.phoneset) if cfg.phoneset else default_phone_set()
        service = AnalysisService(phone_set, ServiceConfig.from_env(workers=cfg.workers, topn=cfg.topn,
                                                                    oov_policy=cfg.oov))
        COMMANDS[cfg.subcommand](cfg, service)
        logger.debug(f"Performance stats: {service.get_performance_stats()}")
        return EXIT_OK
    except UnicodeDecodeError as e:
        return _fail(e, EXIT_DATA_ERROR)
    except (UsageError, ValueError) as e:
        return _fail(e, EXIT_USAGE_ERROR)
    except (PronunciationAnalysisError, OSError) as e:
        return _fail(e, EXIT_DATA_ERROR)


if __name__ == "__main__":
    sys.exit(main())
