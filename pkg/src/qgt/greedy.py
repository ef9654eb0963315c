"""Greedy (thresholding) approximation and Lorentz sequence norms."""

from dataclasses import dataclass

import numpy as np

from ._validation import check_exponent, check_nonneg_int
from .fourier import (
    CoefficientVector,
    basis_function,
    fourier_coefficients,
    natural_index_to_freq,
    synthesize,
)
from .grid import SampledFunction, weighted_lp_norm
from .weights import Weight

__all__ = [
    "DEFAULT_FLOOR",
    "GreedyOrdering",
    "LorentzNorms",
    "greedy_ordering",
    "greedy_approximant",
    "decreasing_rearrangement",
    "lorentz_norms",
    "greedy_error_curve",
]

DEFAULT_FLOOR = 1e-13


@dataclass(frozen=True)
class GreedyOrdering:
    """Natural indices sorted by nonincreasing coefficient modulus.

    Ties go to the smaller natural index first.
    """

    rho: tuple
    moduli: tuple = ()

    def __len__(self):
        return len(self.rho)

    @property
    def freqs(self):
        return tuple(natural_index_to_freq(j) for j in self.rho)


@dataclass(frozen=True)
class LorentzNorms:
    l21: float
    l2inf: float


def greedy_ordering(c, floor=DEFAULT_FLOOR):
    """The greedy permutation of the nonzero coefficients of ``c``.

    Coefficients with modulus ``<= floor`` count as zero, so quadrature noise
    does not enter the ordering.
    """
    moduli = np.abs(c.values)
    keep = moduli > floor
    idx = c.natural_indices[keep]
    moduli = moduli[keep]
    order = np.lexsort((idx, -moduli))
    return GreedyOrdering(
        rho=tuple(int(j) for j in idx[order]),
        moduli=tuple(float(a) for a in moduli[order]),
    )


def _greedy_terms(c, m, floor):
    ordering = greedy_ordering(c, floor)
    rho = np.asarray(ordering.rho[:m], dtype=np.int64)
    freqs = np.where(rho % 2 == 0, -(rho // 2), (rho - 1) // 2)
    return CoefficientVector(freqs, [c[k] for k in freqs])


def greedy_approximant(c, m, grid, floor=DEFAULT_FLOOR):
    """``G_m``: synthesis of the ``m`` leading terms of the greedy ordering."""
    m = check_nonneg_int(m, "m")
    return synthesize(_greedy_terms(c, m, floor), grid)


def decreasing_rearrangement(c):
    """Moduli of ``c`` (a :class:`CoefficientVector` or any sequence), sorted descending."""
    values = c.values if isinstance(c, CoefficientVector) else np.asarray(c)
    return np.sort(np.abs(values).ravel())[::-1]


def lorentz_norms(c):
    """``l2inf = max_n sqrt(n) a*_n`` and ``l21 = sum_n a*_n / sqrt(n)``."""
    a = decreasing_rearrangement(c)
    if a.size == 0:
        return LorentzNorms(0.0, 0.0)
    root = np.sqrt(np.arange(1, a.size + 1))
    return LorentzNorms(l21=float(np.sum(a / root)), l2inf=float(np.max(a * root)))


def greedy_error_curve(f, w, p, m_max, floor=DEFAULT_FLOOR):
    """``[(m, ||f - G_m f||_{p,w}) for m = 0..m_max]``.

    Coefficients are taken up to the largest non-aliased frequency
    ``M/2 - 1`` and errors are measured against the samples of ``f``. When
    ``f`` has energy at the Nyquist frequency the curve bottoms out at that
    residual instead of zero; :func:`truncation_error` reports it.

    ``w`` may be a :class:`Weight` or weight samples on ``f.grid``.
    """
    p = check_exponent(p)
    m_max = check_nonneg_int(m_max, "m_max")
    grid = f.grid
    weight = w.sampled(grid) if isinstance(w, Weight) else w
    coeffs = fourier_coefficients(f, grid.size // 2 - 1)
    ordering = greedy_ordering(coeffs, floor)
    residual = np.array(f.values)
    curve = [(0, weighted_lp_norm(f, weight, p))]
    for m, j in enumerate(ordering.rho[:m_max], start=1):
        k = natural_index_to_freq(j)
        residual -= coeffs[k] * basis_function(k, grid).values
        curve.append((m, weighted_lp_norm(SampledFunction(grid, residual), weight, p)))
    last = curve[-1][1]
    curve.extend((m, last) for m in range(len(curve), m_max + 1))
    return curve


def truncation_error(f, w, p):
    """``||f - T_{M/2-1} f||_{p,w}``: what a full greedy expansion cannot recover."""
    grid = f.grid
    weight = w.sampled(grid) if isinstance(w, Weight) else w
    full = synthesize(fourier_coefficients(f, grid.size // 2 - 1), grid)
    return weighted_lp_norm(f - full, weight, p)
