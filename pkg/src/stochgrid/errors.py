"""Exception types shared across the package."""


class StochgridError(Exception):
    """Base class for all package errors."""


class ParseError(StochgridError):
    """A file could not be parsed (malformed JSON/CSV, unknown keys, bad schema)."""


class ValidationError(StochgridError):
    """A data invariant was violated; the message names the offending object and field."""


class UnknownEquipment(StochgridError):
    """An equipment id was looked up that is not in the catalog."""


class LengthError(StochgridError):
    """A profile series has the wrong number of rows or a hole in its (year, interval) grid."""


class ProfileLengthMismatch(StochgridError):
    """A base case's profiles do not match the time grid used for scenario assembly."""


class BoundError(StochgridError):
    """Variable bounds are contradictory (lb > ub) or a fixed value falls outside its bounds."""


class MissingDesignValue(StochgridError):
    """fix_first_stage was given a design that does not cover every first-stage variable."""


class IndexOutOfRange(StochgridError):
    """A scenario or year index is outside the solved instance's range."""


class LimitExceeded(StochgridError):
    """The built-in exact solver was given an instance beyond its configured limits."""


class SolverNotFound(StochgridError):
    """The external solver executable could not be found."""


class SolverFailed(StochgridError):
    """The external solver exited with a non-zero status."""

    def __init__(self, exit_code, stderr_excerpt=""):
        self.exit_code = exit_code
        self.stderr_excerpt = stderr_excerpt
        super().__init__(f"solver exited with code {exit_code}: {stderr_excerpt}")


class IoError(StochgridError):
    """A file could not be written."""
