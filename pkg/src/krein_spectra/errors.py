"""Exception hierarchy.

Two families matter to callers: :class:`ParameterError` for inputs that
violate a documented precondition, and :class:`NumericalError` for
algorithms that could not deliver the promised accuracy.  The command
line maps them to exit codes 2 and 3.
"""


class KreinSpectraError(Exception):
    """Base class for every error raised by the package."""


class ParameterError(KreinSpectraError, ValueError):
    """An argument lies outside the documented domain."""


class PoleError(ParameterError):
    """Evaluation requested at a pole (of Gamma, zeta, a trace, ...)."""


class ExtensionError(ParameterError):
    """Extension parameter or model not valid for the requested operation."""


class DivergenceError(ParameterError):
    """A spectral sum was requested outside its region of convergence."""


class InsufficientOrderError(ParameterError):
    """The asymptotic subtraction does not reach the requested argument."""


class EigenvalueProximityError(ParameterError):
    """Spectral argument too close to an eigenvalue."""


class NumericalError(KreinSpectraError, ArithmeticError):
    """A numerical procedure failed to reach its accuracy contract."""


class BracketError(NumericalError):
    """A bracket did not show the expected sign change.

    The ``trace`` attribute keeps the sampled residual values so that the
    failure can be diagnosed.
    """

    def __init__(self, message, trace=None):
        super().__init__(message)
        self.trace = trace or []


class ConvergenceError(NumericalError):
    """Iteration or quadrature did not converge."""


class InfeasibleToleranceError(NumericalError):
    """Requested tolerance needs more eigenvalues than can be enumerated."""
