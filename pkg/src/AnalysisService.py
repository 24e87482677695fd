"""
Analysis service tying the pronunciation pipeline together.

load -> phonemize -> align -> accumulate, plus lexicon adaptation and error
scoring. Per-utterance alignment is sharded across worker threads and the
shard statistics are merged afterwards; results do not depend on the number
of workers or on completion order.
"""
import os
import time
from collections import OrderedDict
from concurrent.futures import ThreadPoolExecutor, as_completed
from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Callable, Dict, Iterable, List, Optional, Sequence, Tuple

from Alignment import AlignmentPath, align
from ConfusionAnalysis import (DEFAULT_CONFUSION_SET_SIZE, CategoryConfusionMatrix, ConfidenceRow,
                               PhonemeStats, category_confidence, category_matrix, confidence_table,
                               insertion_ranking, suggest_drop_finals)
from ErrorScoring import (ErrorReport, ReportComparison, Utterance, UtteranceSet, char_error_report,
                          char_tokens, compare_reports, consonant_error_report, paired_ids,
                          subset_word_report, vowel_error_report, word_error_report, word_tokens)
from Lexicon import Lexicon, OovPolicy, PronunciationPolicy, phonemize
from LexiconAdapter import (DEFAULT_DROP_FINALS, AdaptationConfig, AdaptationSummary, adapt_lexicon,
                            summarize_adaptation)
from logger import get_logger
from PhoneSet import PhonemeCategory, PhoneSet, default_phone_set

logger = get_logger("service")


class AlignmentLevel(Enum):
    TOKEN = "token"
    CHAR = "char"


@dataclass
class ServiceConfig:
    """Knobs shared by every operation of the service"""
    workers: int = 1
    topn: int = DEFAULT_CONFUSION_SET_SIZE
    oov_policy: OovPolicy = OovPolicy.STRICT
    pron_policy: PronunciationPolicy = PronunciationPolicy.FIRST

    def __post_init__(self):
        if self.workers < 1:
            raise ValueError("workers must be at least 1")
        if self.topn < 1:
            raise ValueError("confusion set size must be at least 1")

    @classmethod
    def from_env(cls, **overrides: Any) -> "ServiceConfig":
        """Defaults from PRON_WORKERS / PRON_TOPN; explicit non-None overrides win."""
        values: Dict[str, Any] = {
            "workers": int(os.getenv("PRON_WORKERS", "1")),
            "topn": int(os.getenv("PRON_TOPN", str(DEFAULT_CONFUSION_SET_SIZE))),
        }
        values.update({key: value for key, value in overrides.items() if value is not None})
        return cls(**values)


@dataclass
class OperationResult:
    """Structured result container for service operations"""
    operation: str
    payload: Any
    item_count: int
    execution_time: float


@dataclass(frozen=True)
class AnalysisResult:
    utterances: int
    topn: int
    stats: PhonemeStats
    rows: List[ConfidenceRow]
    matrix: CategoryConfusionMatrix
    category_confidence: Dict[PhonemeCategory, Optional[float]]
    top_insertions: List[Tuple[str, int]]
    suggested_drop_finals: Tuple[str, ...] = ()


@dataclass(frozen=True)
class AdaptationResult:
    config: AdaptationConfig
    lexicon: Lexicon
    summary: AdaptationSummary


@dataclass(frozen=True)
class ScoreResult:
    include_insertions: bool
    reports: "OrderedDict[str, ErrorReport]"
    baseline: "OrderedDict[str, ErrorReport]" = field(default_factory=OrderedDict)

    @property
    def comparisons(self) -> "OrderedDict[str, ReportComparison]":
        return OrderedDict(
            (name, compare_reports(self.baseline[name], report))
            for name, report in self.reports.items() if name in self.baseline
        )


def _shard(items: Sequence[str], workers: int) -> List[List[str]]:
    """Round-robin split into at most `workers` non-empty shards."""
    return [list(items[i::workers]) for i in range(min(workers, len(items)))]


class AnalysisService:
    """
    Runs the pronunciation analysis operations and keeps per-operation timings.

    The phone set and lexicons are immutable, so one service instance can be
    shared by the worker threads it spawns.
    """

    def __init__(self, phone_set: Optional[PhoneSet] = None, config: Optional[ServiceConfig] = None):
        self.phone_set = phone_set or default_phone_set()
        self.config = config or ServiceConfig()
        # Performance monitoring
        self._operation_stats: Dict[str, List[float]] = {}

    def _timed(self, operation: str, item_count: int, fn: Callable[[], Any]) -> OperationResult:
        start_time = time.perf_counter()
        payload = fn()
        execution_time = time.perf_counter() - start_time
        self._operation_stats.setdefault(operation, []).append(execution_time)
        logger.debug(f"{operation}: {item_count} item(s) in {execution_time:.4f}s")
        return OperationResult(operation, payload, item_count, execution_time)

    # ==================== INPUT PREPARATION ====================

    def normalize_phone_utterances(self, utterances: UtteranceSet) -> "OrderedDict[str, Utterance]":
        """Validate phoneme transcripts against the phone set and strip stress marks."""
        return OrderedDict(
            (utt_id, Utterance(utt_id, self.phone_set.normalize_sequence(utt.tokens)))
            for utt_id, utt in utterances.items()
        )

    def phonemize_utterances(self, utterances: UtteranceSet, lexicon: Lexicon) -> "OrderedDict[str, Utterance]":
        """Word transcripts to phoneme transcripts by lexicon lookup."""
        phonemized: "OrderedDict[str, Utterance]" = OrderedDict()
        oov_words = set()
        for utt_id, utt in utterances.items():
            result = phonemize(utt.tokens, lexicon, self.config.oov_policy, self.config.pron_policy)
            oov_words.update(result.oov_words)
            phonemized[utt_id] = Utterance(utt_id, result.phones)
        if oov_words:
            logger.warning(f"Skipped {len(oov_words)} out-of-vocabulary word(s): {', '.join(sorted(oov_words))}")
        return phonemized

    # ==================== ANALYSIS ====================

    def _accumulate_shard(self, ids: Iterable[str], hyp_phones: UtteranceSet,
                          ref_phones: UtteranceSet) -> PhonemeStats:
        stats = PhonemeStats()
        for utt_id in ids:
            path = align(hyp_phones[utt_id].tokens, ref_phones[utt_id].tokens)
            logger.debug(f"{utt_id}: {' '.join(str(op) for op in path)}")
            stats.add_path(path, self.phone_set)
        return stats

    def accumulate_stats(self, hyp_phones: UtteranceSet, ref_phones: UtteranceSet) -> PhonemeStats:
        """
        Per-phoneme counts over every paired utterance, sharded across `workers` threads.
        The alignment DP is pure Python and holds the GIL, so the threads do not run in parallel.
        """
        ids = paired_ids(hyp_phones, ref_phones)
        shards = _shard(ids, self.config.workers)
        if len(shards) <= 1:
            return self._accumulate_shard(ids, hyp_phones, ref_phones)

        total = PhonemeStats()
        with ThreadPoolExecutor(max_workers=len(shards)) as executor:
            futures = [executor.submit(self._accumulate_shard, shard, hyp_phones, ref_phones) for shard in shards]
            for future in as_completed(futures):
                total = total + future.result()
        return total

    def analyze(self, hyp_phones: UtteranceSet, ref_phones: UtteranceSet,
                topn: Optional[int] = None, suggest_finals: int = 0) -> OperationResult:
        """Confidence table, confusion sets and category matrix over a phoneme corpus."""
        n = topn or self.config.topn

        def run() -> AnalysisResult:
            hyps = self.normalize_phone_utterances(hyp_phones)
            refs = self.normalize_phone_utterances(ref_phones)
            stats = self.accumulate_stats(hyps, refs)
            rows = confidence_table(stats, self.phone_set, n)
            return AnalysisResult(
                utterances=len(refs),
                topn=n,
                stats=stats,
                rows=rows,
                matrix=category_matrix(stats, self.phone_set),
                category_confidence=category_confidence(rows),
                top_insertions=insertion_ranking(stats),
                suggested_drop_finals=suggest_drop_finals(rows, suggest_finals) if suggest_finals > 0 else (),
            )

        return self._timed("analyze", len(ref_phones), run)

    # ==================== ADAPTATION ====================

    def adapt(self, lexicon: Lexicon, cfg: Optional[AdaptationConfig] = None) -> OperationResult:
        cfg = cfg or AdaptationConfig()

        def run() -> AdaptationResult:
            adapted = adapt_lexicon(lexicon, cfg)
            return AdaptationResult(cfg, adapted, summarize_adaptation(lexicon, adapted))

        return self._timed("adapt", len(lexicon), run)

    # ==================== SCORING ====================

    def _reports(self, hyps: UtteranceSet, refs: UtteranceSet, lexicon: Optional[Lexicon],
                 finals: Iterable[str], hyp_phones: Optional[UtteranceSet],
                 ref_phones: Optional[UtteranceSet], include_insertions: bool) -> "OrderedDict[str, ErrorReport]":
        reports: "OrderedDict[str, ErrorReport]" = OrderedDict()
        reports["word"] = word_error_report(hyps, refs, include_insertions)
        reports["char"] = char_error_report(hyps, refs, include_insertions)
        if lexicon is not None:
            reports["word_subset"] = subset_word_report(hyps, refs, lexicon, finals, include_insertions)

        if ref_phones is not None:
            if hyp_phones is None and lexicon is not None:
                hyp_phones = self.phonemize_utterances(hyps, lexicon)
            if hyp_phones is not None:
                reports["vowel"] = vowel_error_report(hyp_phones, ref_phones, self.phone_set, include_insertions)
                reports["consonant"] = consonant_error_report(hyp_phones, ref_phones, self.phone_set,
                                                              include_insertions)
        return reports

    def score(self, hyps: UtteranceSet, refs: UtteranceSet, lexicon: Optional[Lexicon] = None,
              finals: Iterable[str] = DEFAULT_DROP_FINALS, hyp_phones: Optional[UtteranceSet] = None,
              ref_phones: Optional[UtteranceSet] = None, baseline_hyps: Optional[UtteranceSet] = None,
              include_insertions: bool = True) -> OperationResult:
        """
        WER / CER reports, plus subset and vowel/consonant reports when their inputs are given.

        With `baseline_hyps`, the same reports are computed for the baseline
        system (its phonemes always come from the lexicon) so the two can be
        compared.
        """
        finals = frozenset(finals)

        def run() -> ScoreResult:
            reports = self._reports(hyps, refs, lexicon, finals, hyp_phones, ref_phones, include_insertions)
            baseline: "OrderedDict[str, ErrorReport]" = OrderedDict()
            if baseline_hyps is not None:
                baseline = self._reports(baseline_hyps, refs, lexicon, finals, None, ref_phones, include_insertions)
            return ScoreResult(include_insertions, reports, baseline)

        return self._timed("score", len(refs), run)

    # ==================== ALIGNMENT ====================

    def align(self, hyps: UtteranceSet, refs: UtteranceSet, level: AlignmentLevel = AlignmentLevel.TOKEN,
              utterance_id: Optional[str] = None) -> OperationResult:
        """Per-utterance alignment paths in reference order, or just the one for `utterance_id`."""
        tokenize = char_tokens if level is AlignmentLevel.CHAR else word_tokens

        def run() -> List[Tuple[str, AlignmentPath]]:
            ids = paired_ids(hyps, refs)
            if utterance_id is not None:
                ids = [utt_id for utt_id in ids if utt_id == utterance_id]
            return [(utt_id, align(tokenize(hyps[utt_id]), tokenize(refs[utt_id]))) for utt_id in ids]

        result = self._timed("align", len(refs), run)
        result.item_count = len(result.payload)
        return result

    # ==================== PERFORMANCE MONITORING ====================

    def get_performance_stats(self) -> Dict[str, Any]:
        """Get performance statistics for the operations run so far"""
        if not self._operation_stats:
            return {
                'total_operations': 0,
                'average_execution_time': 0.0,
                'operations': {}
            }

        all_times = []
        operation_stats = {}
        for operation, times in self._operation_stats.items():
            operation_stats[operation] = {
                'count': len(times),
                'average_time': sum(times) / len(times),
                'min_time': min(times),
                'max_time': max(times)
            }
            all_times.extend(times)

        return {
            'total_operations': len(all_times),
            'average_execution_time': sum(all_times) / len(all_times),
            'operations': operation_stats
        }

    def clear_performance_stats(self):
        """Clear performance statistics"""
        self._operation_stats.clear()
