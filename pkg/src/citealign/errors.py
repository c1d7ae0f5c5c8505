"""Exception hierarchy for data-level failures.

Everything under DataError means "the input files are wrong", as opposed to
ValueError, which is reserved for misuse of the in-process API.
"""


class DataError(Exception):
    """Malformed or inconsistent input data."""


class CorpusFormatError(DataError):
    """A corpus file violates the line schema or a corpus invariant."""


class ScoreFileError(DataError):
    """A score file violates the score schema (non-finite value, duplicate key)."""


class ChunkFileError(DataError):
    """A labeled-chunk file violates the chunk dump schema."""


class MissingScoreError(DataError):
    """A protocol run requires scores that the score table does not contain."""
