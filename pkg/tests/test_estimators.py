import numpy as np
import pytest
from sklearn.base import clone
from sklearn.exceptions import NotFittedError
from sklearn.pipeline import make_pipeline

from qgt import (
    FourierCoefficients,
    GreedyApproximator,
    Grid,
    MuckenhouptEstimator,
    PowerWeight,
)
from qgt.fourier import basis_function


@pytest.fixture
def X():
    g = Grid(128)
    rows = [basis_function(k, g).values * (1 + k) + 0.01 * basis_function(40, g).values
            for k in (0, 3, -5)]
    return np.real(np.stack(rows))


def test_fourier_coefficients_round_trip(X):
    est = FourierCoefficients(max_freq=63).fit(X)
    C = est.transform(X)
    assert C.shape == (3, 127) and est.n_features_in_ == 128
    np.testing.assert_allclose(est.inverse_transform(C).real, X, atol=1e-10)


def test_fourier_coefficients_natural_column_order():
    g = Grid(64)
    X = basis_function(-2, g).values.reshape(1, -1)
    C = FourierCoefficients(max_freq=4).fit_transform(X)
    assert np.argmax(np.abs(C[0])) == 3  # natural index 4 <-> frequency -2


def test_greedy_approximator_keeps_largest_terms(X):
    fc = FourierCoefficients().fit(X)
    before = np.abs(fc.transform(X))
    out = make_pipeline(GreedyApproximator(n_terms=2)).fit_transform(X)
    after = np.abs(fc.transform(out))
    kept = after > 1e-9
    assert kept.sum(axis=1).tolist() == [2, 2, 2]
    for b, a, k in zip(before, after, kept):
        np.testing.assert_allclose(a[k], b[k], atol=1e-12)
        assert b[k].min() >= b[~k].max()


def test_estimator_params_and_clone():
    est = GreedyApproximator(n_terms=5, floor=1e-9)
    assert est.get_params() == {"n_terms": 5, "floor": 1e-9}
    assert clone(est).set_params(n_terms=2).n_terms == 2


def test_not_fitted_and_shape_checks(X):
    with pytest.raises(NotFittedError):
        FourierCoefficients().transform(X)
    est = FourierCoefficients(max_freq=4).fit(X)
    with pytest.raises(ValueError):
        est.transform(X[:, :64])
    with pytest.raises(ValueError):
        est.fit(X[0])
    with pytest.raises(ValueError):
        FourierCoefficients().fit(X[:, :127])
    with pytest.raises(ValueError):
        FourierCoefficients(max_freq=64).fit(X)


def test_muckenhoupt_estimator_weight():
    est = MuckenhouptEstimator(p=2, depth=10, grid_size=16384).fit(PowerWeight(1.5))
    assert est.diverging_
    assert est.K_hat_ == est.estimate_.K_hat
    with pytest.raises(ValueError):
        MuckenhouptEstimator(p=1.0).fit(PowerWeight(0.5))
