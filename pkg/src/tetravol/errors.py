"""Exception hierarchy shared by every tetravol module."""


class TetravolError(Exception):
    """Base class for all library errors."""


class InvalidTetra(TetravolError, ValueError):
    pass


class UnsupportedArity(TetravolError, ValueError):
    pass


class CalibrationError(TetravolError):
    """No sign assignment makes the built-in identities vanish."""


class DegenerateConfiguration(TetravolError, ZeroDivisionError):
    """A volume needed as a denominator is zero."""

    def __init__(self, message, volume=None):
        super().__init__(message)
        self.volume = volume


class InfeasibleProfile(TetravolError, ValueError):
    pass


class UnstableKernel(TetravolError):
    """Kernels computed from two independent seeds disagree."""


class TooLarge(TetravolError):
    """A requested computation exceeds its size budget."""

    def __init__(self, message, size=None, budget=None):
        super().__init__(message)
        self.size = size
        self.budget = budget


class NotEmbeddable(TetravolError, ValueError):
    def __init__(self, message, determinant=None):
        super().__init__(message)
        self.determinant = determinant


class DegenerateAngle(TetravolError, ValueError):
    pass


class NoCircle(TetravolError, ValueError):
    pass
