"""Exception hierarchy shared across the package."""


class MixlearnError(Exception):
    """Base class for all domain errors raised by this package."""


class DomainError(MixlearnError):
    """A value lies outside the support or range it must belong to."""


class ContractError(MixlearnError):
    """An operation was called with an unsupported family or mode."""


class FamilyMismatchError(ContractError):
    """Two specs that must share family/shared parameters do not."""


class DegeneracyError(MixlearnError):
    """A leading coefficient vanishes (e.g. binomial trials < moment order)."""


class MomentInconsistencyError(MixlearnError):
    """A solved power sum is too far from an integer to be trusted."""


class ReconstructionError(MixlearnError):
    """No multiset is consistent with the given power sums."""


class AmbiguityError(ReconstructionError):
    """More than one multiset matches; carries both witnesses."""

    def __init__(self, message, witnesses=()):
        super().__init__(message)
        self.witnesses = tuple(witnesses)


class CapExceededError(MixlearnError):
    """An enumeration would exceed the configured desk-scale cap."""


class CertificateUnavailableError(MixlearnError):
    """A generating function diverges, so no tail certificate exists."""


class ParseError(MixlearnError):
    """Malformed input file; carries the offending line number."""

    def __init__(self, message, line=None):
        super().__init__(message if line is None else f"line {line}: {message}")
        self.line = line


class UsageError(MixlearnError):
    """Bad command-line invocation (maps to exit code 2)."""
