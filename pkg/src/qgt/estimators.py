"""scikit-learn compatible wrappers.

Rows of ``X`` are functions sampled on the midpoint grid with
``X.shape[1]`` nodes, so these transformers drop into a ``Pipeline``::

    >>> from sklearn.pipeline import make_pipeline
    >>> pipe = make_pipeline(GreedyApproximator(n_terms=8))
    >>> approx = pipe.fit_transform(X)          # doctest: +SKIP
"""

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_is_fitted

from ._validation import check_exponent, check_nonneg_int, check_sampled_array
from .fourier import CoefficientVector, fourier_coefficients, natural_frequencies, synthesize
from .greedy import DEFAULT_FLOOR, greedy_approximant
from .grid import Grid, SampledFunction
from .weights import DEFAULT_AP_GRID_SIZE, DEFAULT_CAP, TabulatedWeight, Weight, ap_constant

__all__ = ["FourierCoefficients", "GreedyApproximator", "MuckenhouptEstimator"]


class _GridTransformer(TransformerMixin, BaseEstimator):
    def _validate(self, X, reset):
        X = check_sampled_array(X)
        if reset:
            self.n_features_in_ = X.shape[1]
            self.grid_ = Grid(X.shape[1])
        elif X.shape[1] != self.n_features_in_:
            raise ValueError(
                f"X has {X.shape[1]} samples per row, but {type(self).__name__} "
                f"was fitted with {self.n_features_in_}"
            )
        return X


class FourierCoefficients(_GridTransformer):
    """Map sampled functions to their coefficients in natural order.

    Column ``j - 1`` of the output holds ``<f, e_{n_j}>``, natural index ``j``.

    Parameters
    ----------
    max_freq : int or None
        Largest ``|k|`` kept; ``None`` means ``M/2 - 1``.
    """

    def __init__(self, max_freq=None):
        self.max_freq = max_freq

    def fit(self, X, y=None):
        X = self._validate(X, reset=True)
        N = self.grid_.size // 2 - 1 if self.max_freq is None else check_nonneg_int(
            self.max_freq, "max_freq")
        if 2 * N >= self.grid_.size:
            raise ValueError(f"max_freq={N} aliases on a grid of {self.grid_.size} nodes")
        self.max_freq_ = N
        self.freqs_ = natural_frequencies(2 * N + 1)
        return self

    def transform(self, X):
        check_is_fitted(self)
        X = self._validate(X, reset=False)
        out = np.empty((X.shape[0], self.freqs_.size), dtype=complex)
        for i, row in enumerate(X):
            c = fourier_coefficients(SampledFunction(self.grid_, row), self.max_freq_)
            out[i] = [c[k] for k in self.freqs_]
        return out

    def inverse_transform(self, C):
        check_is_fitted(self)
        C = np.asarray(C, dtype=complex)
        if C.ndim != 2 or C.shape[1] != self.freqs_.size:
            raise ValueError(f"expected coefficients of shape (n, {self.freqs_.size})")
        return np.stack(
            [synthesize(CoefficientVector(self.freqs_, c), self.grid_).values for c in C]
        )


class GreedyApproximator(_GridTransformer):
    """Replace each sampled function by its greedy ``n_terms``-term approximant.

    Thresholding acts on each row separately, so ``fit`` only records the
    grid. The output is complex: a real function's coefficients at ``k``
    and ``-k`` tie in modulus, and an odd ``n_terms`` keeps only one of them.

    Parameters
    ----------
    n_terms : int
        Number of terms kept.
    floor : float
        Coefficients with modulus at or below this are treated as zero.
    """

    def __init__(self, n_terms=1, floor=DEFAULT_FLOOR):
        self.n_terms = n_terms
        self.floor = floor

    def fit(self, X, y=None):
        self._validate(X, reset=True)
        check_nonneg_int(self.n_terms, "n_terms")
        return self

    def transform(self, X):
        check_is_fitted(self)
        X = self._validate(X, reset=False)
        N = self.grid_.size // 2 - 1
        return np.stack([
            greedy_approximant(
                fourier_coefficients(SampledFunction(self.grid_, row), N),
                self.n_terms, self.grid_, self.floor,
            ).values
            for row in X
        ])


class MuckenhouptEstimator(BaseEstimator):
    """Estimate the A_p constant of a weight.

    ``fit`` accepts a :class:`~qgt.weights.Weight` or a 1-d array of weight
    samples on a midpoint grid, which is treated as a tabulated weight.

    Attributes
    ----------
    K_hat_ : float
    diverging_ : bool
    argmax_interval_ : tuple of (center, length)
    estimate_ : ApEstimate
    """

    def __init__(self, p=2.0, depth=12, grid_size=DEFAULT_AP_GRID_SIZE, cap=DEFAULT_CAP,
                 refinement=16, growth_factor=2.0):
        self.p = p
        self.depth = depth
        self.grid_size = grid_size
        self.cap = cap
        self.refinement = refinement
        self.growth_factor = growth_factor

    def fit(self, w, y=None):
        if not isinstance(w, Weight):
            values = np.asarray(w, dtype=float)
            if values.ndim != 1:
                raise ValueError("weight samples must be one-dimensional")
            w = TabulatedWeight.from_grid(Grid(values.size), values)
        p = check_exponent(self.p)
        est = ap_constant(w, p, self.depth, Grid(self.grid_size), cap=self.cap,
                          refinement=self.refinement, growth_factor=self.growth_factor)
        self.estimate_ = est
        self.K_hat_ = est.K_hat
        self.diverging_ = est.diverging
        self.argmax_interval_ = est.argmax_interval
        return self
