import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qgt import (
    CoefficientVector,
    ConstantWeight,
    Grid,
    PowerWeight,
    SampledFunction,
    dirichlet_kernel,
    fourier_coefficients,
    freq_to_natural_index,
    natural_index_to_freq,
    partial_sum_natural,
    partial_sum_symmetric,
    sample,
    weighted_lp_norm,
)
from qgt.fourier import (
    basis_function,
    dyadic_growth,
    natural_frequencies,
    operator_norm_probe,
    synthesize,
)

SQRT_2PI = math.sqrt(2 * math.pi)


def random_coeffs(rng, degree):
    freqs = np.arange(-degree, degree + 1)
    return CoefficientVector(freqs, rng.normal(size=freqs.size) + 1j * rng.normal(size=freqs.size))


# ---------------------------------------------------------------- natural ordering

@pytest.mark.parametrize("j, k", [(1, 0), (2, -1), (3, 1), (4, -2), (5, 2), (15, 7)])
def test_natural_ordering_examples(j, k):
    assert natural_index_to_freq(j) == k
    assert freq_to_natural_index(k) == j


def test_natural_index_rejects_zero():
    with pytest.raises(ValueError):
        natural_index_to_freq(0)


@given(st.integers(-10**9, 10**9))
def test_natural_ordering_bijection(k):
    assert natural_index_to_freq(freq_to_natural_index(k)) == k


def test_natural_frequencies_prefix():
    assert natural_frequencies(7).tolist() == [0, -1, 1, -2, 2, -3, 3]


# ---------------------------------------------------------------- coefficient vectors

def test_coefficient_vector_lookup_and_duplicates():
    c = CoefficientVector.from_dict({3: 1.0, -1: 2j})
    assert c[3] == 1.0 and c[-1] == 2j and c[7] == 0
    assert c.max_freq == 3 and len(c) == 2
    assert c.natural_indices.tolist() == [2, 7]
    with pytest.raises(ValueError):
        CoefficientVector([1, 1], [1.0, 2.0])
    with pytest.raises(ValueError):
        CoefficientVector([1], [np.inf])


# ---------------------------------------------------------------- coefficients

def test_coefficients_of_basis_function():
    c = fourier_coefficients(basis_function(5, Grid(256)), 8)
    for k in range(-8, 9):
        assert abs(c[k] - (1.0 if k == 5 else 0.0)) < 1e-12


def test_coefficients_of_constant():
    c = fourier_coefficients(sample(lambda t: np.ones_like(t), Grid(64)), 2)
    assert c[0] == pytest.approx(SQRT_2PI, abs=1e-12)
    assert max(abs(c[k]) for k in (-2, -1, 1, 2)) < 1e-12


def test_coefficients_of_sign_match_analytic_value():
    # <sign, e_1> = (2pi)^(-1/2) int sign(t) e^{-it} dt = -4i / sqrt(2pi)
    c = fourier_coefficients(sample(np.sign, Grid(4096)), 1)
    assert c[1] == pytest.approx(-c[-1], abs=1e-15)
    assert abs(c[1] - (-4j / SQRT_2PI)) < 1e-6


def test_coefficients_reject_aliasing():
    f = sample(np.cos, Grid(64))
    with pytest.raises(ValueError, match="alias"):
        fourier_coefficients(f, 32)
    fourier_coefficients(f, 31)


def test_fft_matches_direct_quadrature(rng):
    g = Grid(512)
    f = SampledFunction(g, rng.normal(size=512) + 1j * rng.normal(size=512))
    a = fourier_coefficients(f, 255, "fft")
    b = fourier_coefficients(f, 255, "direct")
    np.testing.assert_allclose(a.values, b.values, rtol=0, atol=1e-12)


def test_synthesize_matches_pointwise_sum(rng):
    g = Grid(64)
    c = CoefficientVector([-40, 3, 100], [1.0, 2j, -0.5])  # beyond Nyquist on purpose
    expected = sum(v * np.exp(1j * k * g.nodes) for k, v in zip(c.freqs, c.values)) / SQRT_2PI
    np.testing.assert_allclose(synthesize(c, g).values, expected, atol=1e-12)


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 100), st.integers(0, 2**32 - 1))
def test_parseval_and_reproduction(degree, seed):
    rng = np.random.default_rng(seed)
    g = Grid(256)
    c = random_coeffs(rng, degree)
    f = synthesize(c, g)
    back = fourier_coefficients(f, 127)
    for k in range(-degree, degree + 1):
        assert abs(back[k] - c[k]) < 1e-10
    one = SampledFunction(g, np.ones(g.size))
    assert weighted_lp_norm(f, one, 2) ** 2 == pytest.approx(np.sum(np.abs(c.values) ** 2),
                                                            rel=1e-10)


@settings(max_examples=20, deadline=None)
@given(st.integers(1, 60), st.floats(-math.pi, math.pi), st.integers(0, 2**32 - 1))
def test_translation_covariance(degree, u, seed):
    # f(t - u) has coefficients e^{-iku} <f, e_k>
    rng = np.random.default_rng(seed)
    g = Grid(256)
    c = random_coeffs(rng, degree)
    shifted = CoefficientVector(c.freqs, c.values * np.exp(-1j * c.freqs * u))
    direct = sum(v * np.exp(1j * k * (g.nodes - u)) for k, v in zip(c.freqs, c.values)) / SQRT_2PI
    np.testing.assert_allclose(synthesize(shifted, g).values, direct, atol=1e-10)


# ---------------------------------------------------------------- partial sums

def test_partial_sum_examples():
    g = Grid(128)
    e3 = basis_function(3, g)
    c = fourier_coefficients(e3, 10)
    np.testing.assert_allclose(partial_sum_symmetric(c, 5, g).values, e3.values, atol=1e-12)
    assert np.max(np.abs(partial_sum_symmetric(c, 2, g).values)) < 1e-12
    const = CoefficientVector([0], [SQRT_2PI])
    np.testing.assert_allclose(partial_sum_symmetric(const, 0, g).values, 1.0, atol=1e-12)


def test_partial_sum_natural_first_nonzero_for_e_minus_2():
    g = Grid(64)
    c = fourier_coefficients(basis_function(-2, g), 5)
    sizes = [np.max(np.abs(partial_sum_natural(c, N, g).values)) for N in range(1, 6)]
    assert all(s < 1e-12 for s in sizes[:3]) and sizes[3] > 0.1


def test_partial_sum_natural_one_is_constant_term(rng):
    g = Grid(64)
    c = random_coeffs(rng, 5)
    np.testing.assert_allclose(partial_sum_natural(c, 1, g).values, c[0] / SQRT_2PI, atol=1e-14)


@settings(max_examples=30, deadline=None)
@given(st.integers(1, 100), st.integers(0, 2**32 - 1))
def test_s_2n_plus_1_equals_t_n(N, seed):
    g = Grid(512)
    c = random_coeffs(np.random.default_rng(seed), 120)
    a = partial_sum_natural(c, 2 * N + 1, g).values
    b = partial_sum_symmetric(c, N, g).values
    assert np.max(np.abs(a - b)) < 1e-12


# ---------------------------------------------------------------- Dirichlet kernel

def test_dirichlet_n1_constant():
    np.testing.assert_allclose(dirichlet_kernel(1, 0.0, Grid(32)).values, 1 / SQRT_2PI, atol=1e-15)


def test_dirichlet_n3_closed_form():
    g = Grid(256)
    expected = (1 + 2 * np.cos(g.nodes)) / SQRT_2PI
    assert np.max(np.abs(dirichlet_kernel(3, 0.0, g).values - expected)) < 1e-12


def test_dirichlet_n3_closed_form_symbolic():
    sympy = pytest.importorskip("sympy")
    t = sympy.symbols("t", real=True)
    total = sum(sympy.exp(sympy.I * k * t) for k in (0, -1, 1))
    assert sympy.simplify((total - (1 + 2 * sympy.cos(t))).rewrite(sympy.cos)) == 0


def test_dirichlet_shift():
    g = Grid(256)
    u = 0.7
    expected = np.sum([np.exp(1j * k * (g.nodes - u)) for k in natural_frequencies(6)], axis=0)
    np.testing.assert_allclose(dirichlet_kernel(6, u, g).values, expected / SQRT_2PI, atol=1e-12)


@pytest.mark.parametrize("N", [1, 4, 64, 511])
def test_dirichlet_parseval(N):
    g = Grid(4096)
    one = SampledFunction(g, np.ones(g.size))
    assert abs(weighted_lp_norm(dirichlet_kernel(N, 0.0, g), one, 2) - math.sqrt(N)) < 1e-10


# ---------------------------------------------------------------- operator norm probe

def test_probe_unit_weight_p2_is_projection():
    ratios = operator_norm_probe(ConstantWeight(1.0), 2.0, 64, trials=4, grid=Grid(1024))
    for _, r in ratios:
        assert abs(r - 1.0) < 1e-10


def test_probe_unit_weight_p4_bounded():
    ratios = operator_norm_probe(ConstantWeight(1.0), 4.0, None, trials=4, grid=Grid(1024),
                                 N_values=range(1, 65))
    assert max(r for _, r in ratios) < 3.0


def test_probe_power3_grows():
    ratios = [r for _, r in operator_norm_probe(PowerWeight(3.0), 2.0, 512, trials=2,
                                                grid=Grid(4096), N_values=[8, 16, 32, 64, 128, 256, 512])]
    assert all(b > a for a, b in zip(ratios, ratios[1:]))
    assert dyadic_growth(ratios)


def test_probe_deterministic():
    a = operator_norm_probe(PowerWeight(0.5), 3.0, 32, trials=3, seed=9, grid=Grid(512))
    b = operator_norm_probe(PowerWeight(0.5), 3.0, 32, trials=3, seed=9, grid=Grid(512), n_jobs=4)
    assert a == b


def test_dyadic_growth():
    assert dyadic_growth([1, 1.3, 1.7, 2.2])
    assert not dyadic_growth([1, 1.3, 1.3, 2.2, 2.2])
    assert not dyadic_growth([1, 2])
