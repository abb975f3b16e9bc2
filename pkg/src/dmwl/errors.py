"""Exception types shared across the package.

Two families matter for the CLI exit-code mapping: DataError (bad or
inconsistent input data) and ScorerFailure (the confidence scorer, local
or remote, could not produce usable scores).
"""


class DmwlError(Exception):
    """Base class for all package-specific errors."""


class DataError(DmwlError):
    """Invalid or inconsistent input data."""


class DuplicateDocIdError(DataError):
    """A corpus contains the same doc_id more than once."""


class SchemaError(DataError):
    """A persisted file does not match its declared schema."""

    def __init__(self, message: str, line: int | None = None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line


class InvalidParamsError(DataError):
    """Parameters outside the documented domain of an operation."""


class InvalidDistributionError(DataError):
    """Weights that do not form a usable categorical distribution."""


class OutOfRangeScoreError(DataError):
    """A confidence score outside [0, 1]."""


class GazetteerMissingError(DataError):
    """Company-name filtering requested but no gazetteer is available."""


class MissingDMListError(DataError):
    """A dataset strategy needs a DM list that was not supplied."""


class MissingScorerError(DataError):
    """A dataset strategy or discovery run needs a scorer that was not supplied."""


class EmptyDatasetError(DataError):
    """An operation that needs at least one example got none."""


class InvalidSpecError(DataError):
    """A synthetic-corpus plant spec violates its invariants."""


class ScorerFailure(DmwlError):
    """Base class for scorer-side failures."""


class UnreachableError(ScorerFailure):
    """The scorer endpoint could not be reached or died mid-conversation."""


class ProtocolError(ScorerFailure):
    """The scorer answered with something that is not a valid response."""


class ScorerError(ScorerFailure):
    """The scorer answered with its error field set."""


class ScorerTimeoutError(ScorerFailure):
    """The scorer did not answer within the configured timeout."""
