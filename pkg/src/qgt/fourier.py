"""The trigonometric system ``e_k(t) = (2pi)^(-1/2) e^(ikt)`` on a midpoint grid.

Frequencies are enumerated in the natural order ``0, -1, 1, -2, 2, ...``;
natural index ``j >= 1`` maps to frequency ``n_j``.
"""

from dataclasses import dataclass, field

import numpy as np

from ._parallel import pmap, rng_for
from ._validation import check_exponent, check_finite_values, check_nonneg_int, check_positive_int
from .grid import Grid, SampledFunction, weighted_lp_norm, wrap_angle
from .weights import critical_points

__all__ = [
    "CoefficientVector",
    "natural_index_to_freq",
    "freq_to_natural_index",
    "natural_frequencies",
    "basis_function",
    "fourier_coefficients",
    "synthesize",
    "partial_sum_symmetric",
    "partial_sum_natural",
    "dirichlet_kernel",
    "operator_norm_probe",
    "probe_test_functions",
    "dyadic_growth",
]

INV_SQRT_2PI = 1.0 / np.sqrt(2.0 * np.pi)


def natural_index_to_freq(j):
    """Frequency ``n_j`` at natural index ``j`` (1-based): 0, -1, 1, -2, 2, ..."""
    j = check_positive_int(j, "natural index")
    return -(j // 2) if j % 2 == 0 else (j - 1) // 2


def freq_to_natural_index(k):
    k = int(k)
    if k == 0:
        return 1
    return -2 * k if k < 0 else 2 * k + 1


def _natural_index_array(freqs):
    freqs = np.asarray(freqs, dtype=np.int64)
    return np.where(freqs == 0, 1, np.where(freqs < 0, -2 * freqs, 2 * freqs + 1))


def natural_frequencies(N):
    """Frequencies ``n_1, ..., n_N`` as an int array."""
    j = np.arange(1, check_nonneg_int(N, "N") + 1)
    return np.where(j % 2 == 0, -(j // 2), (j - 1) // 2).astype(np.int64)


@dataclass(frozen=True, eq=False)
class CoefficientVector:
    """Finite map from frequency to complex coefficient; absent frequencies are 0.

    Stored as sorted unique ``freqs`` with matching ``values``.
    """

    freqs: np.ndarray = field(repr=False)
    values: np.ndarray = field(repr=False)

    def __post_init__(self):
        freqs = np.asarray(self.freqs, dtype=np.int64).ravel()
        values = check_finite_values(np.asarray(self.values).ravel(), "coefficients")
        if freqs.shape != values.shape:
            raise ValueError("freqs and values must have the same length")
        if np.unique(freqs).size != freqs.size:
            raise ValueError("duplicate frequencies in coefficient vector")
        order = np.argsort(freqs, kind="stable")
        freqs, values = freqs[order], values[order]
        freqs.flags.writeable = False
        values.flags.writeable = False
        object.__setattr__(self, "freqs", freqs)
        object.__setattr__(self, "values", values)

    @classmethod
    def from_dict(cls, entries):
        keys = list(entries)
        return cls(np.array(keys, dtype=np.int64), np.array([entries[k] for k in keys], dtype=complex))

    @classmethod
    def from_natural(cls, values):
        """Coefficients ``values[j-1]`` attached to natural indices ``j = 1..len(values)``."""
        values = np.asarray(values, dtype=complex)
        return cls(natural_frequencies(values.size), values)

    @property
    def max_freq(self):
        return int(np.abs(self.freqs).max()) if self.freqs.size else 0

    @property
    def natural_indices(self):
        return _natural_index_array(self.freqs)

    def as_dict(self):
        return {int(k): complex(v) for k, v in zip(self.freqs, self.values)}

    def __getitem__(self, k):
        i = np.searchsorted(self.freqs, k)
        if i < self.freqs.size and self.freqs[i] == k:
            return complex(self.values[i])
        return 0j

    def __len__(self):
        return int(self.freqs.size)

    def restrict(self, mask):
        return CoefficientVector(self.freqs[mask], self.values[mask])


def basis_function(k, grid, shift=0.0):
    """Samples of ``e_k(t - shift)``."""
    t = grid.nodes - shift
    return SampledFunction(grid, INV_SQRT_2PI * np.exp(1j * int(k) * t))


def _phase(freqs, grid):
    # e^(ik t_j) = (-1)^k e^(ik delta/2) e^(2 pi i k j / M) for t_j = -pi + (j + 1/2) delta
    freqs = np.asarray(freqs, dtype=np.int64)
    sign = np.where(freqs % 2 == 0, 1.0, -1.0)
    return sign * np.exp(0.5j * freqs * grid.spacing)


def fourier_coefficients(f, N, method="fft"):
    """``<f, e_k>`` for ``|k| <= N`` by midpoint quadrature.

    ``method="fft"`` evaluates the same quadrature sum through the FFT;
    ``method="direct"`` forms it explicitly in O(M N) and is kept as an
    independent check.
    """
    N = check_nonneg_int(N, "N")
    M = f.grid.size
    if 2 * N >= M:
        raise ValueError(f"N = {N} aliases on a grid of {M} nodes; need N < {M // 2}")
    freqs = np.arange(-N, N + 1, dtype=np.int64)
    if method == "fft":
        spectrum = np.fft.fft(f.values)
        values = f.grid.spacing * INV_SQRT_2PI * np.conj(_phase(freqs, f.grid)) * spectrum[freqs % M]
    elif method == "direct":
        t = f.grid.nodes
        values = np.empty(freqs.size, dtype=complex)
        for start in range(0, freqs.size, 256):
            block = freqs[start:start + 256]
            kernel = np.exp(-1j * np.outer(block, t))
            values[start:start + 256] = f.grid.spacing * INV_SQRT_2PI * (kernel @ f.values)
    else:
        raise ValueError(f"unknown method {method!r}")
    return CoefficientVector(freqs, values)


def synthesize(c, grid):
    """Samples of ``sum_k c[k] e_k`` on ``grid``; exact for every frequency."""
    M = grid.size
    bins = np.zeros(M, dtype=complex)
    np.add.at(bins, c.freqs % M, c.values * _phase(c.freqs, grid))
    return SampledFunction(grid, M * INV_SQRT_2PI * np.fft.ifft(bins))


def partial_sum_symmetric(c, N, grid):
    """``T_N``: synthesis of the coefficients with ``|k| <= N``."""
    N = check_nonneg_int(N, "N")
    return synthesize(c.restrict(np.abs(c.freqs) <= N), grid)


def partial_sum_natural(c, N, grid):
    """``S_N``: synthesis of the coefficients at natural indices ``1..N``."""
    N = check_nonneg_int(N, "N")
    return synthesize(c.restrict(c.natural_indices <= N), grid)


def dirichlet_kernel(N, shift=0.0, grid=None):
    """Samples of ``D_N(t - shift) = sum_{j<=N} e_{n_j}(t - shift)``."""
    N = check_positive_int(N, "N")
    grid = grid or Grid()
    freqs = natural_frequencies(N)
    return synthesize(CoefficientVector(freqs, np.exp(-1j * freqs * shift)), grid)


def _unit_disc(rng, n):
    return np.sqrt(rng.random(n)) * np.exp(2j * np.pi * rng.random(n))


def probe_test_functions(w, p, N, trials, seed, grid):
    """The deterministic test family used by :func:`operator_norm_probe` at size ``N``.

    * ``trials`` random trigonometric polynomials with coefficients uniform on
      the unit disc; trial 0 has degree ``N`` (so ``T_N`` fixes it), the
      others a random degree in ``[0, 2N]``.
    * At each critical point ``z`` of ``w``: a step ``tanh(N (t - z))`` smoothed
      at scale ``1/N``, and the dual-weight bump
      ``(w + w_N(z))^(-1/(p-1))`` tapered by ``cos^2`` on ``|t - z| < pi/2``,
      where ``w_N(z)`` is the largest weight value within ``1/N`` of ``z``.
      The bump is the extremal function for the A_p quotient at scale ``1/N``.
    """
    t = grid.nodes
    half = grid.size // 2 - 1
    out = []
    for trial in range(trials):
        rng = rng_for(seed, N, trial)
        degree = N if trial == 0 else int(rng.integers(0, 2 * N + 1))
        degree = min(degree, half)
        freqs = np.arange(-degree, degree + 1)
        out.append(synthesize(CoefficientVector(freqs, _unit_disc(rng, freqs.size)), grid).values)
    wv = np.asarray(w(t), dtype=float)
    for z in critical_points(w, grid):
        d = wrap_angle(t - z)
        out.append(np.tanh(N * d).astype(complex))
        near = np.abs(d) <= max(1.0 / N, grid.spacing)
        floor = wv[near].max() if near.any() else wv.max()
        with np.errstate(divide="ignore", over="ignore"):
            bump = (wv + floor) ** (-1.0 / (p - 1.0))
        taper = np.where(np.abs(d) < np.pi / 2, np.cos(d) ** 2, 0.0)
        bump = np.where(taper > 0, bump * taper, 0.0)
        if np.all(np.isfinite(bump)):
            out.append(bump.astype(complex))
    return out


def operator_norm_probe(w, p, N_max, trials=8, seed=1, grid=None, N_values=None, n_jobs=1):
    """Lower bounds for ``||T_N||`` on ``L^p(w)``.

    For each ``N`` the ratio ``||T_N f||_{p,w} / ||f||_{p,w}`` is maximized over
    :func:`probe_test_functions`. The result is a lower bound on the true
    operator norm of the discretized ``T_N``, never an upper bound.

    ``N_values`` defaults to the powers of two up to ``N_max``.

    Returns
    -------
    list of (N, ratio) tuples
    """
    p = check_exponent(p)
    grid = grid or Grid()
    trials = check_positive_int(trials, "trials")
    if N_values is None:
        N_max = check_positive_int(N_max, "N_max")
        N_values = [2**i for i in range(N_max.bit_length()) if 2**i <= N_max]
    N_values = [check_nonneg_int(N, "N") for N in N_values]
    weight = w.sampled(grid)

    def one(N):
        best = 0.0
        for values in probe_test_functions(w, p, N, trials, seed, grid):
            f = SampledFunction(grid, values)
            denom = weighted_lp_norm(f, weight, p)
            if denom == 0.0:
                continue
            coeffs = fourier_coefficients(f, min(N, grid.size // 2 - 1))
            ratio = weighted_lp_norm(synthesize(coeffs, grid), weight, p) / denom
            best = max(best, ratio)
        return (N, best)

    return pmap(one, N_values, n_jobs)


def dyadic_growth(values, factor=1.2, run=3):
    """True when ``values`` grows by at least ``factor`` over ``run`` consecutive steps."""
    values = np.asarray(values, dtype=float)
    if values.size < run + 1:
        return False
    steps = values[1:] / values[:-1]
    hits = steps >= factor
    return any(hits[i:i + run].all() for i in range(hits.size - run + 1))
