"""Exception types shared across the package."""


class SuppmineError(Exception):
    """Base class for all package errors."""


class ParseError(SuppmineError):
    """A record could not be parsed. Carries the 1-based line number."""

    def __init__(self, message, line_no=None):
        super().__init__(message if line_no is None else f"line {line_no}: {message}")
        self.line_no = line_no


class ValidationError(SuppmineError):
    """Input parsed but violates an invariant."""


class CatalogLookupError(SuppmineError):
    """A CUI was requested that the catalog does not contain."""


class TrainingError(SuppmineError):
    """Baseline training could not proceed (e.g. single-class data)."""


class ScorerError(SuppmineError):
    """Base class for external-scorer failures."""


class ScorerTransportError(ScorerError):
    """The scorer process/endpoint could not be reached or timed out."""


class ScorerProtocolError(ScorerError):
    """The scorer answered, but not in the agreed wire format."""


class SnapshotError(SuppmineError):
    """A snapshot directory failed version or checksum verification."""


class ReportError(SuppmineError):
    """A report table is missing required cells."""
