"""Input validation helpers shared by the functional API and the estimators."""

import math
import numbers

import numpy as np


def check_exponent(p, *, allow_one=False, name="p"):
    """Return ``p`` as a float, raising ``ValueError`` unless ``1 < p < inf``.

    ``allow_one`` admits ``p == 1``, used internally for L^1 norms of kernels.
    """
    if isinstance(p, bool) or not isinstance(p, numbers.Real):
        raise TypeError(f"{name} must be a real number, got {type(p).__name__}")
    p = float(p)
    lower_ok = p >= 1.0 if allow_one else p > 1.0
    if not (lower_ok and math.isfinite(p)):
        bound = "at least 1" if allow_one else "exceed 1"
        raise ValueError(f"{name} must {bound} and be finite, got {p}")
    return p


def check_grid_size(M, *, minimum=2, name="grid size"):
    if isinstance(M, bool) or not isinstance(M, numbers.Integral):
        raise TypeError(f"{name} must be an integer, got {type(M).__name__}")
    M = int(M)
    if M < minimum:
        raise ValueError(f"{name} must be at least {minimum}, got {M}")
    if M % 2:
        raise ValueError(f"{name} must be even, got {M}")
    return M


def check_nonneg_int(n, name):
    if isinstance(n, bool) or not isinstance(n, numbers.Integral):
        raise TypeError(f"{name} must be an integer, got {type(n).__name__}")
    if n < 0:
        raise ValueError(f"{name} must be nonnegative, got {n}")
    return int(n)


def check_positive_int(n, name):
    n = check_nonneg_int(n, name)
    if n < 1:
        raise ValueError(f"{name} must be positive, got {n}")
    return n


def check_finite_values(values, name="values"):
    """Coerce to a 1-d complex array and reject NaN/Inf, naming the first bad index."""
    arr = np.array(values, dtype=complex)
    if arr.ndim != 1:
        raise ValueError(f"{name} must be one-dimensional, got shape {arr.shape}")
    bad = ~np.isfinite(arr)
    if bad.any():
        j = int(np.flatnonzero(bad)[0])
        raise ValueError(f"{name} contains a non-finite entry at index {j}: {arr[j]}")
    return arr


def check_sampled_array(X, name="X"):
    """2-d array of function samples, one row per function, on an even midpoint grid.

    sklearn's ``check_array`` rejects complex input, hence this helper.
    """
    X = np.asarray(X)
    if X.ndim == 1:
        raise ValueError(
            f"{name} must be 2-d (n_samples, grid_size); reshape a single function with "
            "X.reshape(1, -1)"
        )
    if X.ndim != 2:
        raise ValueError(f"{name} must be 2-d, got shape {X.shape}")
    X = X.astype(complex if np.iscomplexobj(X) else float)
    if not np.all(np.isfinite(X)):
        raise ValueError(f"{name} contains NaN or infinity")
    check_grid_size(X.shape[1], name="number of grid samples")
    return X
