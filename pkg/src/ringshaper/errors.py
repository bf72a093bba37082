"""Exception types shared across the toolkit."""


class RingshaperError(Exception):
    """Base class for toolkit errors."""


class DomainError(RingshaperError, ValueError):
    """An argument lies outside the domain of an operation."""


class ConfigurationError(RingshaperError, ValueError):
    """Design parameters or a scenario config are inconsistent."""


class NormalizationError(RingshaperError, ValueError):
    """||G|| = sqrt(2 pi) ||g|| does not hold where a bound requires it."""


class ResolutionError(RingshaperError):
    """A grid or step count is too coarse for the requested accuracy."""

    def __init__(self, message: str, required: int | None = None):
        super().__init__(message)
        self.required = required
