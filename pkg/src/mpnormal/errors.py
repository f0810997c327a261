"""Exception hierarchy."""


class MPNormalError(Exception):
    """Base class for all package errors."""


class NonHermitian(MPNormalError, ValueError):
    pass


class DimensionMismatch(MPNormalError, ValueError):
    pass


class CommutationViolated(MPNormalError, ValueError):
    pass


class InvalidBlock(MPNormalError, ValueError):
    """Raised when a block fails validation; carries the offending report."""

    def __init__(self, message, report=None, block_index=None):
        super().__init__(message)
        self.report = report
        self.block_index = block_index


class EmptySpectrum(MPNormalError, ValueError):
    pass


class DivergentTail(MPNormalError, ValueError):
    pass


class BadExponent(MPNormalError, ValueError):
    pass


class ProbeInSpectrum(MPNormalError, ValueError):
    pass


class SingularStencil(MPNormalError, ValueError):
    pass


class BoundaryNotZero(MPNormalError, ValueError):
    pass


class InstanceError(MPNormalError):
    """Instance-file problem. ``issues`` lists every violation found."""

    def __init__(self, message, issues=()):
        self.issues = list(issues)
        if self.issues:
            message = message + ":\n  " + "\n  ".join(self.issues)
        super().__init__(message)


class ParseError(InstanceError):
    pass


class OrderError(InstanceError):
    pass


class ValidationError(InstanceError):
    def __init__(self, message, issues=(), reports=()):
        super().__init__(message, issues)
        self.reports = list(reports)
