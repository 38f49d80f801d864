"""Exception hierarchy shared by all engine modules.

Every error carries a stable ``code`` string so the CLI and HTTP layer can
emit machine-readable errors without string matching.
"""

from __future__ import annotations


class VismcaError(Exception):
    """Base class for all engine errors."""

    code = "ERROR"

    def __init__(self, message: str):
        super().__init__(message)
        self.message = message


class IngestFailure(VismcaError):
    code = "INGEST_FAILURE"


class ParseError(IngestFailure):
    """Input is not well-formed JSON or does not match the dataset schema."""

    code = "PARSE_ERROR"


class ValidationError(IngestFailure):
    """Dataset parsed but violates invariants; carries the full report."""

    code = "VALIDATION_ERROR"

    def __init__(self, report):
        issues = "; ".join(f"{e.code}({e.entity}): {e.message}" for e in report.errors)
        super().__init__(f"dataset rejected: {issues}")
        self.report = report


class UnknownImage(VismcaError):
    code = "UNKNOWN_IMAGE"


class UnknownDetection(VismcaError):
    code = "UNKNOWN_DETECTION"


class UnknownLabel(VismcaError):
    code = "UNKNOWN_LABEL"


class UnknownClass(VismcaError):
    code = "UNKNOWN_CLASS"


class UnknownObject(VismcaError):
    code = "UNKNOWN_OBJECT"


class EmptySelection(VismcaError):
    code = "EMPTY_SELECTION"


class CorruptLog(VismcaError):
    code = "CORRUPT_LOG"


class BadBinCount(VismcaError):
    code = "BAD_BIN_COUNT"


class BadThreshold(VismcaError):
    code = "BAD_THRESHOLD"


class BadRequest(VismcaError):
    """Malformed request parameter outside the typed error cases."""

    code = "BAD_REQUEST"


class NoPositives(VismcaError):
    """A class has no corrected occurrences, so its PR curve is undefined."""

    code = "NO_POSITIVES"


class WrongSource(VismcaError):
    code = "WRONG_SOURCE"


class StoreLocked(VismcaError):
    code = "STORE_LOCKED"


class PortInUse(VismcaError):
    code = "PORT_IN_USE"


class ReadOnlyStore(VismcaError):
    code = "READ_ONLY"
