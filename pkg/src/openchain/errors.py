"""Exception hierarchy shared by all openchain modules."""


class OpenChainError(Exception):
    """Base class for every error raised by openchain."""


class InputError(OpenChainError, ValueError):
    """Invalid arguments (bad site index, wrong shape, inconsistent config)."""


class SizeError(OpenChainError):
    """A requested matrix dimension exceeds the configured cap."""


class SingularityError(OpenChainError):
    """Matrix too ill-conditioned to invert."""


class NumericalError(OpenChainError):
    """A numerical routine failed to converge or violated its own post-condition."""

    def __init__(self, message, diagnostics=None):
        super().__init__(message)
        self.diagnostics = dict(diagnostics or {})


class PoleError(OpenChainError, ZeroDivisionError):
    """A rational kernel was evaluated within the pole guard of one of its denominators."""

    def __init__(self, kernel, value):
        super().__init__(f"{kernel}: denominator {value!r} inside pole guard")
        self.kernel = kernel
        self.value = value


class NotTriangularizableError(OpenChainError):
    """The two boundary matrices admit no common upper-triangular basis."""

    def __init__(self, message, constraint_value):
        super().__init__(message)
        self.constraint_value = constraint_value


class FormMismatchError(NumericalError):
    """Two independent assemblies of the same operator disagree."""


class ZeroVectorError(NumericalError):
    """An assembled Bethe vector vanished up to rounding."""
