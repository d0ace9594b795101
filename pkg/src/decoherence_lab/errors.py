"""Exception hierarchy shared by all modules."""


class DecoherenceLabError(Exception):
    """Base class for errors raised by this package."""


class ValidationError(DecoherenceLabError, ValueError):
    """An input record violates a type invariant."""

    def __init__(self, message, field=None):
        super().__init__(message)
        self.field = field


class CatalogParseError(DecoherenceLabError, ValueError):
    """A catalog or scenario document could not be parsed."""

    def __init__(self, message, index=None):
        super().__init__(message)
        self.index = index


class DomainError(DecoherenceLabError, ValueError):
    """A formula was evaluated outside its domain of validity."""


class StabilityError(DecoherenceLabError, ValueError):
    """The requested time step exceeds the explicit-scheme stability bound."""


class NumericalError(DecoherenceLabError, RuntimeError):
    """The integration produced non-finite values.

    ``snapshot`` holds the last finite field, when one is available.
    """

    def __init__(self, message, snapshot=None):
        super().__init__(message)
        self.snapshot = snapshot


class RegimeWarning(UserWarning):
    """A small-separation expansion was evaluated outside its validity window."""
