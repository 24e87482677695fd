"""
Error types shared by the pronunciation analysis modules.

The CLI maps every PronunciationAnalysisError to exit status 1.
"""

from typing import Iterable, Optional, Sequence


class PronunciationAnalysisError(Exception):
    """Base class for data errors raised by the analysis pipeline."""

    def __init__(self, message: str, line: Optional[int] = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class UnknownPhonemeError(PronunciationAnalysisError):
    """Raised when a symbol is not part of the configured phone set."""

    def __init__(self, symbol: str, line: Optional[int] = None, reason: str = "unknown phoneme"):
        self.symbol = symbol
        super().__init__(f"{reason} '{symbol}'", line)


class PhoneSetFormatError(PronunciationAnalysisError):
    """Raised when a phone-set file cannot be parsed."""


class LexiconParseError(PronunciationAnalysisError):
    """Raised when a pronunciation dictionary line is malformed."""


class OutOfVocabularyError(PronunciationAnalysisError):
    """Raised when phonemization meets words absent from the lexicon."""

    def __init__(self, words: Iterable[str]):
        self.words = tuple(words)
        super().__init__(f"out-of-vocabulary word(s): {', '.join(self.words)}")


class AlignmentDimensionError(PronunciationAnalysisError):
    """Raised when a score matrix does not match the sequences it is traced against."""


class TranscriptFormatError(PronunciationAnalysisError):
    """Raised when a transcript file is malformed."""


class MissingUtteranceError(PronunciationAnalysisError):
    """Raised when hypothesis and reference utterance ids do not pair up."""

    def __init__(self, missing_refs: Sequence[str] = (), missing_hyps: Sequence[str] = ()):
        self.missing_refs = tuple(missing_refs)
        self.missing_hyps = tuple(missing_hyps)
        parts = []
        if self.missing_refs:
            parts.append(f"no reference for hypothesis id(s): {', '.join(self.missing_refs)}")
        if self.missing_hyps:
            parts.append(f"no hypothesis for reference id(s): {', '.join(self.missing_hyps)}")
        super().__init__("; ".join(parts) or "utterance ids do not match")


class InputEncodingError(PronunciationAnalysisError):
    """Raised when an input file is not valid UTF-8."""

    def __init__(self, path: str, error: UnicodeDecodeError):
        self.path = path
        super().__init__(f"{path} is not valid UTF-8 (byte offset {error.start})")
