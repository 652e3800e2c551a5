"""Exception types shared across the toolkit."""


class SentiparError(Exception):
    """Base class for all toolkit errors."""


class ParseError(SentiparError):
    """Malformed bracketed parse input.

    ``offset`` is the 0-based character position where parsing failed.
    """

    def __init__(self, message: str, offset: int):
        super().__init__(f"{message} (offset {offset})")
        self.offset = offset


class EmptyInputError(SentiparError):
    """An operation received empty input where content is required."""


class DegenerateTreeError(SentiparError):
    """A tree operation needs a clause-level root, got a bare leaf."""


class EmptyMiningSetError(SentiparError):
    """Rule mining requires at least one phrase sequence."""


class AlignmentError(SentiparError):
    """Parallel inputs have mismatched lengths or record ids."""


class LanguageMismatchError(SentiparError):
    """Lexicons of different languages cannot be merged."""


class LexiconFormatError(SentiparError):
    """A lexicon file line could not be interpreted.

    ``lineno`` is 1-based.
    """

    def __init__(self, message: str, lineno: int):
        super().__init__(f"{message} (line {lineno})")
        self.lineno = lineno


class MalformedLineError(SentiparError):
    """A corpus/TSV file line violates the expected column layout."""

    def __init__(self, message: str, lineno: int):
        super().__init__(f"{message} (line {lineno})")
        self.lineno = lineno


class UndefinedScoreError(SentiparError):
    """A metric denominator is zero (e.g. empty reference for TER)."""


class ProviderError(SentiparError):
    """A translation provider call failed after retries."""


class ConfigError(SentiparError):
    """Invalid or incomplete pipeline configuration (CLI exit code 2)."""


class PipelineError(SentiparError):
    """A pipeline stage could not produce usable output (CLI exit code 1)."""
