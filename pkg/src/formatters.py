"""
Plain-text and CSV renderings of the analysis results.

Column orders are fixed. Floats are rounded here and nowhere else: confidence
scores and rates to 2 decimals, category-matrix cells to 4. Undefined values
print as N/A.
"""
import csv
import io
from typing import Iterable, List, Mapping, Optional, Sequence, Tuple

from Alignment import AlignmentPath, format_alignment
from ConfusionAnalysis import CategoryConfusionMatrix, ConfidenceRow
from ErrorScoring import ErrorReport, ReportComparison
from LexiconAdapter import AdaptationSummary

NOT_AVAILABLE = "N/A"
CONFIDENCE_COLUMNS = ["phoneme", "c_q", "rank", "confusions", "category", "C", "S", "I", "D"]
REPORT_COLUMNS = ["report", "N", "C", "S", "I", "D", "ER", "S_rate", "I_rate", "D_rate"]
ALIGNMENT_COLUMNS = ["utterance", "position", "op", "ref", "hyp"]


def format_number(value: Optional[float], digits: int = 2) -> str:
    if value is None:
        return NOT_AVAILABLE
    return f"{value:.{digits}f}"


def _render_table(header: Sequence[str], rows: Iterable[Sequence[str]]) -> str:
    rows = [list(header)] + [list(row) for row in rows]
    widths = [max(len(row[i]) for row in rows) for i in range(len(header))]
    lines = ["  ".join(cell.ljust(width) for cell, width in zip(row, widths)).rstrip() for row in rows]
    lines.insert(1, "  ".join("-" * width for width in widths))
    return "\n".join(lines) + "\n"


def _to_csv(header: Sequence[str], rows: Iterable[Sequence[object]]) -> str:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)
    return buffer.getvalue()


# ==================== CONFIDENCE TABLE ====================

def _confidence_cells(row: ConfidenceRow) -> List[str]:
    counts = row.counts
    return [
        row.phoneme,
        format_number(row.confidence),
        NOT_AVAILABLE if row.rank is None else str(row.rank),
        " ".join(row.confusion_set),
        row.category.value,
        str(counts.correct), str(counts.substitutions), str(counts.insertions), str(counts.deletions),
    ]


def format_confidence_table(rows: Sequence[ConfidenceRow]) -> str:
    return _render_table(CONFIDENCE_COLUMNS, (_confidence_cells(row) for row in rows))


def confidence_table_csv(rows: Sequence[ConfidenceRow]) -> str:
    return _to_csv(CONFIDENCE_COLUMNS, (_confidence_cells(row) for row in rows))


# ==================== CATEGORY MATRIX ====================

def _matrix_cells(matrix: CategoryConfusionMatrix) -> List[List[str]]:
    return [[truth] + [format_number(float(value), 4) for value in matrix.values[i]]
            for i, truth in enumerate(matrix.labels)]


def format_category_matrix(matrix: CategoryConfusionMatrix) -> str:
    return _render_table(["truth"] + list(matrix.labels), _matrix_cells(matrix))


def category_matrix_csv(matrix: CategoryConfusionMatrix) -> str:
    return _to_csv(["truth"] + list(matrix.labels), _matrix_cells(matrix))


def format_category_confidence(by_category: Mapping) -> str:
    return _render_table(["category", "mean_c_q"],
                         ([category.value, format_number(value)] for category, value in by_category.items()))


def format_insertions(top_insertions: Sequence[Tuple[str, int]]) -> str:
    return _render_table(["phoneme", "I"], ([phoneme, str(count)] for phoneme, count in top_insertions))


# ==================== ERROR REPORTS ====================

def _report_cells(name: str, report: ErrorReport) -> List[str]:
    return [
        name, str(report.n_ref),
        str(report.correct), str(report.substitutions), str(report.insertions), str(report.deletions),
        format_number(report.error_rate), format_number(report.substitution_rate),
        format_number(report.insertion_rate), format_number(report.deletion_rate),
    ]


def format_error_reports(reports: Mapping[str, ErrorReport]) -> str:
    return _render_table(REPORT_COLUMNS, (_report_cells(name, report) for name, report in reports.items()))


def error_reports_csv(reports: Mapping[str, ErrorReport]) -> str:
    return _to_csv(REPORT_COLUMNS, (_report_cells(name, report) for name, report in reports.items()))


def format_comparisons(comparisons: Mapping[str, ReportComparison]) -> str:
    return _render_table(
        ["report", "baseline_ER", "system_ER", "abs_reduction", "rel_reduction_%"],
        ([name, format_number(c.baseline.error_rate), format_number(c.system.error_rate),
          format_number(c.absolute), format_number(c.relative)] for name, c in comparisons.items()),
    )


# ==================== ALIGNMENTS ====================

def format_alignments(alignments: Sequence[Tuple[str, AlignmentPath]]) -> str:
    blocks = [f"{utt_id} (distance {path.distance})\n{format_alignment(path)}\n" for utt_id, path in alignments]
    return "\n".join(blocks)


def alignments_csv(alignments: Sequence[Tuple[str, AlignmentPath]]) -> str:
    rows = []
    for utt_id, path in alignments:
        for position, op in enumerate(path, start=1):
            rows.append([utt_id, position, op.kind.value,
                         "" if op.ref is None else op.ref, "" if op.hyp is None else op.hyp])
    return _to_csv(ALIGNMENT_COLUMNS, rows)


# ==================== ADAPTATION ====================

def format_adaptation_summary(summary: AdaptationSummary) -> str:
    added = ", ".join(f"{origin} +{count}" for origin, count in summary.by_origin.items() if count)
    line = (f"{summary.words} words, {summary.words_touched} words touched, "
            f"{summary.prons_before} -> {summary.prons_after} prons, {summary.prons_added} prons added")
    return f"{line} ({added})" if added else line
