"""Spectral functions of singular self-adjoint extensions."""

from .asympt import AsymptoticSeries, PoleEntry, PoleTable, pole_table
from .errors import (BracketError, ConvergenceError, DivergenceError,
                     EigenvalueProximityError, ExtensionError, InfeasibleToleranceError,
                     InsufficientOrderError, KreinSpectraError, NumericalError,
                     ParameterError, PoleError)
from .models import (AharonovBohmL0, DiracInterval, InverseSquareInterval,
                     OscillatorHalfLine, SusySupercharge)
from .specfn import (SpectralSample, eta, graded_partition, heat_trace, heat_trace_diff,
                     resolvent_trace_sum, zeta_continued, zeta_sum)
from .spectrum import (EigenvalueStream, eigenvalues, eigenvalues_up_to, first_eigenvalues,
                       merge_streams, negative_modes, nth_eigenvalue)

__all__ = [
    "AharonovBohmL0", "AsymptoticSeries", "BracketError", "ConvergenceError",
    "DiracInterval", "DivergenceError", "EigenvalueProximityError", "EigenvalueStream",
    "ExtensionError", "InfeasibleToleranceError", "InsufficientOrderError",
    "InverseSquareInterval", "KreinSpectraError", "NumericalError", "OscillatorHalfLine",
    "ParameterError", "PoleEntry", "PoleError", "PoleTable", "SpectralSample",
    "SusySupercharge", "eigenvalues", "eigenvalues_up_to", "eta", "first_eigenvalues",
    "graded_partition", "heat_trace", "heat_trace_diff", "merge_streams", "negative_modes",
    "nth_eigenvalue", "pole_table", "resolvent_trace_sum", "zeta_continued", "zeta_sum",
]
