"""Exception hierarchy.

Everything raised on purpose by the package derives from :class:`WgqedError`.
The CLI maps :class:`ValidationError` to exit status 1 and
:class:`NumericalDegeneracyError` to exit status 2.
"""


class WgqedError(Exception):
    """Base class for package errors."""


class ValidationError(WgqedError, ValueError):
    """Invalid input. ``field`` names the offending parameter when known."""

    def __init__(self, message, field=None):
        super().__init__(message)
        self.field = field


class CommensurabilityError(ValidationError):
    """A phase is not an integer multiple of pi."""


class ConfigError(ValidationError):
    """Malformed run configuration. ``line`` is 1-based when known."""

    def __init__(self, message, field=None, line=None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message, field=field)
        self.line = line


class ShapeError(WgqedError, ValueError):
    """A spectrum does not have the expected Lorentzian shape."""


class NumericalDegeneracyError(WgqedError, ArithmeticError):
    """A quantity needed to finish the computation vanished."""


class SingularSiteError(NumericalDegeneracyError):
    """Transfer matrix requested for a lossless emitter exactly on resonance."""


class PoleError(NumericalDegeneracyError):
    """A closed-form expression was evaluated on its pole."""


class UndefinedRatioError(NumericalDegeneracyError):
    """Reflection ratio with a vanishing denominator."""

    def __init__(self, message, r12=None, r21=None):
        super().__init__(message)
        self.r12 = r12
        self.r21 = r21
