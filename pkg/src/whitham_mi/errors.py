"""Exception hierarchy. Numerical failures map to CLI exit code 3."""


class WhithamError(Exception):
    """Base class for all package errors."""


class ParameterDomainError(WhithamError, ValueError):
    """Inputs violate an operation's precondition."""


class UnsupportedModelError(WhithamError, ValueError):
    """The requested quantity is not defined for this dispersion family."""


class NumericalError(WhithamError, RuntimeError):
    """A numerical procedure failed (bracketing, eigensolve, ...)."""


class ResonanceError(NumericalError):
    """Wave number lies on (or too close to) a resonance k_N."""

    def __init__(self, msg, N=None, k_N=None):
        super().__init__(msg)
        self.N = N
        self.k_N = k_N


class ConvergenceError(NumericalError):
    """Newton iteration failed to converge."""
