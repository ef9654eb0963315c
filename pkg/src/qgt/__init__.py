"""Greedy m-term trigonometric approximation in weighted spaces L^p(T; w).

Modules
-------
grid         midpoint grids, sampling, quadrature, weighted norms
weights      weight families, A_p estimation, essential bounds
fourier      natural ordering, coefficients, partial sums, Dirichlet kernels
greedy       greedy ordering and approximants, Lorentz norms
experiments  numerical witnesses and the quasi-greedy verdict
estimators   scikit-learn compatible wrappers
cli          ``qgt`` command line
"""

from .estimators import FourierCoefficients, GreedyApproximator, MuckenhouptEstimator
from .fourier import (
    CoefficientVector,
    dirichlet_kernel,
    fourier_coefficients,
    freq_to_natural_index,
    natural_index_to_freq,
    partial_sum_natural,
    partial_sum_symmetric,
)
from .greedy import greedy_approximant, greedy_error_curve, greedy_ordering, lorentz_norms
from .grid import Grid, SampledFunction, integrate, sample, weighted_lp_norm
from .report import ExperimentReport
from .weights import (
    ConstantWeight,
    PolyPowerWeight,
    PowerWeight,
    TabulatedWeight,
    TrigWeight,
    ap_constant,
    essential_bounds,
    parse_weight_spec,
)

__version__ = "0.1.0"

__all__ = [
    "CoefficientVector",
    "ConstantWeight",
    "ExperimentReport",
    "FourierCoefficients",
    "GreedyApproximator",
    "Grid",
    "MuckenhouptEstimator",
    "PolyPowerWeight",
    "PowerWeight",
    "SampledFunction",
    "TabulatedWeight",
    "TrigWeight",
    "ap_constant",
    "dirichlet_kernel",
    "essential_bounds",
    "fourier_coefficients",
    "freq_to_natural_index",
    "greedy_approximant",
    "greedy_error_curve",
    "greedy_ordering",
    "integrate",
    "lorentz_norms",
    "natural_index_to_freq",
    "parse_weight_spec",
    "partial_sum_natural",
    "partial_sum_symmetric",
    "sample",
    "weighted_lp_norm",
]
