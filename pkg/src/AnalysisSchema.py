from typing import Dict, List, Optional

from pydantic import BaseModel, Field

from Alignment import AlignmentPath
from ConfusionAnalysis import CategoryConfusionMatrix, ConfidenceRow
from ErrorScoring import ErrorReport, ReportComparison
from Lexicon import Lexicon
from LexiconAdapter import AdaptationConfig, AdaptationSummary


# Define Pydantic models for the JSON documents written by `--format json`
class ConfidenceRowModel(BaseModel):
    phoneme: str
    category: str
    c_q: Optional[float] = None
    rank: Optional[int] = None
    correct: int = 0
    substitutions: int = 0
    insertions: int = 0
    deletions: int = 0
    confusions: List[str] = Field(default_factory=list)

    @classmethod
    def from_row(cls, row: ConfidenceRow) -> "ConfidenceRowModel":
        return cls(
            phoneme=row.phoneme,
            category=row.category.value,
            c_q=row.confidence,
            rank=row.rank,
            correct=row.counts.correct,
            substitutions=row.counts.substitutions,
            insertions=row.counts.insertions,
            deletions=row.counts.deletions,
            confusions=list(row.confusion_set),
        )


class CategoryMatrixModel(BaseModel):
    labels: List[str]
    counts: List[List[float]]
    values: List[List[float]]

    @classmethod
    def from_matrix(cls, matrix: CategoryConfusionMatrix) -> "CategoryMatrixModel":
        return cls(labels=list(matrix.labels), counts=matrix.counts.tolist(), values=matrix.values.tolist())


class InsertionCountModel(BaseModel):
    phoneme: str
    count: int


class AnalysisReportModel(BaseModel):
    utterances: int
    confusion_set_size: int
    rows: List[ConfidenceRowModel]
    category_matrix: CategoryMatrixModel
    category_confidence: Dict[str, Optional[float]] = Field(default_factory=dict)
    top_insertions: List[InsertionCountModel] = Field(default_factory=list)
    suggested_drop_finals: List[str] = Field(default_factory=list)


class ErrorReportModel(BaseModel):
    report: str
    n_ref: int
    correct: int
    substitutions: int
    insertions: int
    deletions: int
    defined: bool
    error_rate: Optional[float] = None
    substitution_rate: Optional[float] = None
    insertion_rate: Optional[float] = None
    deletion_rate: Optional[float] = None
    oov_words: List[str] = Field(default_factory=list)

    @classmethod
    def from_report(cls, name: str, report: ErrorReport) -> "ErrorReportModel":
        return cls(
            report=name,
            n_ref=report.n_ref,
            correct=report.correct,
            substitutions=report.substitutions,
            insertions=report.insertions,
            deletions=report.deletions,
            defined=report.defined,
            error_rate=report.error_rate,
            substitution_rate=report.substitution_rate,
            insertion_rate=report.insertion_rate,
            deletion_rate=report.deletion_rate,
            oov_words=list(report.oov_words),
        )


class ReportComparisonModel(BaseModel):
    report: str
    baseline_error_rate: Optional[float] = None
    system_error_rate: Optional[float] = None
    absolute: Optional[float] = None
    relative: Optional[float] = None

    @classmethod
    def from_comparison(cls, name: str, comparison: ReportComparison) -> "ReportComparisonModel":
        return cls(
            report=name,
            baseline_error_rate=comparison.baseline.error_rate,
            system_error_rate=comparison.system.error_rate,
            absolute=comparison.absolute,
            relative=comparison.relative,
        )


class ScoreReportModel(BaseModel):
    include_insertions: bool = True
    reports: List[ErrorReportModel]
    baseline: List[ErrorReportModel] = Field(default_factory=list)
    comparisons: List[ReportComparisonModel] = Field(default_factory=list)


class AlignmentOpModel(BaseModel):
    op: str
    ref: Optional[str] = None
    hyp: Optional[str] = None


class AlignmentModel(BaseModel):
    utterance_id: str
    level: str
    distance: int
    correct: int
    substitutions: int
    insertions: int
    deletions: int
    ops: List[AlignmentOpModel]

    @classmethod
    def from_path(cls, utterance_id: str, level: str, path: AlignmentPath) -> "AlignmentModel":
        counts = path.counts
        return cls(
            utterance_id=utterance_id,
            level=level,
            distance=path.distance,
            correct=counts.correct,
            substitutions=counts.substitutions,
            insertions=counts.insertions,
            deletions=counts.deletions,
            ops=[AlignmentOpModel(op=op.kind.value,
                                  ref=None if op.ref is None else str(op.ref),
                                  hyp=None if op.hyp is None else str(op.hyp)) for op in path],
        )


class AlignmentReportModel(BaseModel):
    alignments: List[AlignmentModel]


class PronunciationModel(BaseModel):
    phones: List[str]
    origin: str


class LexiconEntryModel(BaseModel):
    word: str
    prons: List[PronunciationModel]


class AdaptationSummaryModel(BaseModel):
    words: int
    words_touched: int
    prons_before: int
    prons_after: int
    prons_added: int
    by_origin: Dict[str, int] = Field(default_factory=dict)

    @classmethod
    def from_summary(cls, summary: AdaptationSummary) -> "AdaptationSummaryModel":
        return cls(
            words=summary.words,
            words_touched=summary.words_touched,
            prons_before=summary.prons_before,
            prons_after=summary.prons_after,
            prons_added=summary.prons_added,
            by_origin=dict(summary.by_origin),
        )


class AdaptationReportModel(BaseModel):
    mode: str
    drop_finals: List[str]
    max_vowel_repeat: int
    cross_compose: bool
    summary: AdaptationSummaryModel
    entries: List[LexiconEntryModel]

    @classmethod
    def from_adaptation(cls, cfg: AdaptationConfig, summary: AdaptationSummary,
                        lexicon: Lexicon) -> "AdaptationReportModel":
        return cls(
            mode=cfg.mode.value,
            drop_finals=sorted(cfg.drop_finals),
            max_vowel_repeat=cfg.max_vowel_repeat,
            cross_compose=cfg.cross_compose,
            summary=AdaptationSummaryModel.from_summary(summary),
            entries=[
                LexiconEntryModel(word=entry.word,
                                  prons=[PronunciationModel(phones=list(p.phones), origin=p.origin.value)
                                         for p in entry.prons])
                for entry in lexicon
            ],
        )
