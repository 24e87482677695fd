"""
Levenshtein alignment between a hypothesis and a reference token sequence.

Tokens are generic (phonemes, words or characters). The score matrix has one
row per hypothesis token and one column per reference token, plus the empty
prefix row/column. Costs are unit for substitution, insertion and deletion.
"""

from dataclasses import dataclass
from enum import Enum
from typing import Hashable, List, Optional, Sequence, Tuple

import numpy as np

from errors import AlignmentDimensionError

EPSILON = None
EPSILON_MARK = "*"


class EditKind(Enum):
    MATCH = "C"
    SUBSTITUTE = "S"
    INSERT = "I"
    DELETE = "D"


@dataclass(frozen=True)
class EditOp:
    """One column of an alignment; `None` stands for the empty token ε."""
    kind: EditKind
    ref: Optional[Hashable]
    hyp: Optional[Hashable]

    def __post_init__(self):
        if self.kind is EditKind.MATCH:
            valid = self.ref is not None and self.hyp is not None and self.ref == self.hyp
        elif self.kind is EditKind.SUBSTITUTE:
            valid = self.ref is not None and self.hyp is not None and self.ref != self.hyp
        elif self.kind is EditKind.DELETE:
            valid = self.ref is not None and self.hyp is None
        else:
            valid = self.ref is None and self.hyp is not None
        if not valid:
            raise ValueError(f"inconsistent edit op {self.kind.name}({self.ref!r}, {self.hyp!r})")

    def __str__(self) -> str:
        if self.kind is EditKind.SUBSTITUTE:
            return f"S({self.ref}->{self.hyp})"
        if self.kind is EditKind.INSERT:
            return f"I({self.hyp})"
        return f"{self.kind.value}({self.ref})"


@dataclass(frozen=True)
class AlignmentCounts:
    correct: int = 0
    substitutions: int = 0
    insertions: int = 0
    deletions: int = 0

    @property
    def errors(self) -> int:
        return self.substitutions + self.insertions + self.deletions

    @property
    def ref_length(self) -> int:
        return self.correct + self.substitutions + self.deletions

    def __add__(self, other: "AlignmentCounts") -> "AlignmentCounts":
        return AlignmentCounts(
            self.correct + other.correct,
            self.substitutions + other.substitutions,
            self.insertions + other.insertions,
            self.deletions + other.deletions,
        )

    @classmethod
    def from_ops(cls, ops: Sequence[EditOp]) -> "AlignmentCounts":
        tally = {kind: 0 for kind in EditKind}
        for op in ops:
            tally[op.kind] += 1
        return cls(tally[EditKind.MATCH], tally[EditKind.SUBSTITUTE],
                   tally[EditKind.INSERT], tally[EditKind.DELETE])


@dataclass(frozen=True)
class AlignmentPath:
    ops: Tuple[EditOp, ...]

    @property
    def counts(self) -> AlignmentCounts:
        return AlignmentCounts.from_ops(self.ops)

    @property
    def distance(self) -> int:
        return self.counts.errors

    def ref_tokens(self) -> Tuple[Hashable, ...]:
        return tuple(op.ref for op in self.ops if op.ref is not None)

    def hyp_tokens(self) -> Tuple[Hashable, ...]:
        return tuple(op.hyp for op in self.ops if op.hyp is not None)

    def __iter__(self):
        return iter(self.ops)

    def __len__(self) -> int:
        return len(self.ops)


@dataclass(frozen=True)
class ScoreMatrix:
    """(len(hyp)+1) x (len(ref)+1) grid of cumulative edit costs"""
    cells: np.ndarray

    @property
    def shape(self) -> Tuple[int, int]:
        return self.cells.shape

    @property
    def distance(self) -> int:
        return int(self.cells[-1, -1])


def levenshtein_matrix(hyp: Sequence[Hashable], ref: Sequence[Hashable]) -> ScoreMatrix:
    rows, cols = len(hyp) + 1, len(ref) + 1
    cells = np.zeros((rows, cols), dtype=np.int64)
    cells[0, :] = np.arange(cols)
    cells[:, 0] = np.arange(rows)

    for i in range(1, rows):
        hyp_token = hyp[i - 1]
        for j in range(1, cols):
            diagonal = cells[i - 1, j - 1] + (0 if hyp_token == ref[j - 1] else 1)
            cells[i, j] = min(diagonal, cells[i, j - 1] + 1, cells[i - 1, j] + 1)

    return ScoreMatrix(cells)


def traceback(matrix: ScoreMatrix, hyp: Sequence[Hashable], ref: Sequence[Hashable]) -> AlignmentPath:
    """
    Recover one optimal path from the bottom-right cell.

    Ties prefer the diagonal (match/substitute), then deletion, then insertion.
    """
    if matrix.shape != (len(hyp) + 1, len(ref) + 1):
        raise AlignmentDimensionError(
            f"score matrix {matrix.shape} does not match sequence lengths "
            f"({len(hyp)}, {len(ref)})"
        )

    cells = matrix.cells
    i, j = len(hyp), len(ref)
    ops: List[EditOp] = []

    while i > 0 or j > 0:
        here = cells[i, j]
        if i > 0 and j > 0:
            same = hyp[i - 1] == ref[j - 1]
            if cells[i - 1, j - 1] + (0 if same else 1) == here:
                kind = EditKind.MATCH if same else EditKind.SUBSTITUTE
                ops.append(EditOp(kind, ref[j - 1], hyp[i - 1]))
                i, j = i - 1, j - 1
                continue
        if j > 0 and cells[i, j - 1] + 1 == here:
            ops.append(EditOp(EditKind.DELETE, ref[j - 1], EPSILON))
            j -= 1
            continue
        if i > 0 and cells[i - 1, j] + 1 == here:
            ops.append(EditOp(EditKind.INSERT, EPSILON, hyp[i - 1]))
            i -= 1
            continue
        raise AlignmentDimensionError(f"score matrix is not consistent with the sequences at ({i}, {j})")

    ops.reverse()
    return AlignmentPath(tuple(ops))


def align(hyp: Sequence[Hashable], ref: Sequence[Hashable]) -> AlignmentPath:
    return traceback(levenshtein_matrix(hyp, ref), hyp, ref)


def edit_distance(hyp: Sequence[Hashable], ref: Sequence[Hashable]) -> int:
    return levenshtein_matrix(hyp, ref).distance


def format_alignment(path: AlignmentPath) -> str:
    """sclite-style REF / HYP / EVAL rows, `*` marking the empty side"""
    ref_row, hyp_row, eval_row = ["REF: "], ["HYP: "], ["EVAL:"]
    for op in path:
        ref = EPSILON_MARK if op.ref is None else str(op.ref)
        hyp = EPSILON_MARK if op.hyp is None else str(op.hyp)
        mark = "" if op.kind is EditKind.MATCH else op.kind.value
        width = max(len(ref), len(hyp), len(mark))
        ref_row.append(ref.ljust(width))
        hyp_row.append(hyp.ljust(width))
        eval_row.append(mark.ljust(width))
    return "\n".join(" ".join(row).rstrip() for row in (ref_row, hyp_row, eval_row))
