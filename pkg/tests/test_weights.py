import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qgt import (
    ConstantWeight,
    Grid,
    MuckenhouptEstimator,
    PolyPowerWeight,
    PowerWeight,
    TabulatedWeight,
    TrigWeight,
    ap_constant,
    essential_bounds,
    parse_weight_spec,
)
from qgt.weights import _ap_scan, critical_points, evaluate

HALF = TrigWeight(1.0, cos=(0.5,))


# ---------------------------------------------------------------- families

def test_power_weight_values_and_periodicity():
    w = PowerWeight(0.5)
    assert evaluate(w, 0.25) == pytest.approx(0.5)
    assert evaluate(w, 0.25 + 2 * math.pi) == pytest.approx(0.5)
    assert w.singular_points() == (0.0,)


def test_negative_power_is_infinite_at_zero_but_finite_on_grid():
    w = PowerWeight(-0.5)
    assert evaluate(w, 0.0) == math.inf
    assert np.all(np.isfinite(w.sampled(Grid(64)).values))


def test_polypower_rejects_non_periodic_polynomial():
    with pytest.raises(ValueError, match="periodic"):
        PolyPowerWeight((0.0, -1.0, 1.0), 0.5)  # t(t-1)


def test_polypower_degree_and_roots():
    w = PolyPowerWeight((-1.0, 0.0, 1.0), 0.3)  # t^2 - 1
    assert w.degree == 2
    assert w.singular_points() == pytest.approx((-1.0, 1.0))
    assert evaluate(w, 2.0) == pytest.approx(3.0**0.3)


def test_trig_weight_rejects_negative():
    with pytest.raises(ValueError):
        TrigWeight(1.0, cos=(1.5,))


def test_constant_weight_rejects_nonpositive():
    with pytest.raises(ValueError):
        ConstantWeight(0.0)


def test_tabulated_nearest_and_wrap():
    w = TabulatedWeight(np.array([-2.0, 0.0, 3.0]), np.array([1.0, 2.0, 3.0]))
    assert evaluate(w, 0.4) == 2.0
    assert evaluate(w, -1.2) == 1.0
    # -3.1 lies 0.18 from 3.0 across the seam and 1.1 from -2.0
    assert evaluate(w, -3.1) == 3.0


def test_tabulated_from_csv(tmp_path):
    path = tmp_path / "w.csv"
    path.write_text("t,value\n-1,2\n1,4\n")
    w = parse_weight_spec(f"tabulated:file={path}")
    assert evaluate(w, 0.9) == 4.0
    assert w.spec == f"tabulated:file={path}"


def test_tabulated_path_with_colon(tmp_path):
    d = tmp_path / "a:b"
    d.mkdir()
    path = d / "w.csv"
    path.write_text("0,1\n")
    assert evaluate(parse_weight_spec(f"tabulated:file={path}"), 1.0) == 1.0


def test_scaled_weight():
    w = PowerWeight(0.5) * 3.0
    assert evaluate(w, 0.25) == pytest.approx(1.5)
    assert w.singular_points() == (0.0,)


# ---------------------------------------------------------------- parsing

@pytest.mark.parametrize("spec, kind", [
    ("constant:c=2", ConstantWeight),
    ("power:alpha=0.8", PowerWeight),
    ("polypower:coeffs=0,0,1:mu=0.4", PolyPowerWeight),
    ("trig:a0=1:cos1=0.5", TrigWeight),
    ("trig:sin2=0.25:a0=1", TrigWeight),
])
def test_parse_round_trip(spec, kind):
    w = parse_weight_spec(spec)
    assert isinstance(w, kind)
    again = parse_weight_spec(w.spec)
    t = Grid(64).nodes
    np.testing.assert_array_equal(w(t), again(t))


@pytest.mark.parametrize("spec", [
    "power", "power:alpha=x", "power:alpha=1:alpha=2", "power:alpha=1:beta=2",
    "gauss:s=1", "constant:c=-1", "trig:cos1=1", "polypower:mu=1", "tabulated:",
    "polypower:coeffs=0,-1,1:mu=0.6",
])
def test_parse_rejects(spec):
    with pytest.raises(ValueError):
        parse_weight_spec(spec)


# ---------------------------------------------------------------- essential bounds

def test_essential_bounds_trig():
    lo, hi = essential_bounds(HALF, Grid(8192))
    assert abs(lo - 0.5) < 1e-4 and abs(hi - 1.5) < 1e-4


def test_essential_bounds_power_lower_small():
    lo, _ = essential_bounds(PowerWeight(0.8), Grid(4096))
    assert lo < 0.01


def test_critical_points_include_singularity_and_extrema():
    pts = critical_points(PowerWeight(0.8), Grid(1024))
    assert 0.0 in pts
    assert len(pts) == 2  # the argmin coincides with 0 up to grid spacing


# ---------------------------------------------------------------- A_p estimation

def _brute_ap(values, p, depth):
    """Direct double loop over the same dyadic, quarter-shifted interval family."""
    M = values.size
    best = 0.0
    for level in range(depth + 1):
        n = max(1, round(M / 2**level))
        for s in range(0, M, max(1, n // 4)):
            idx = np.arange(s, s + n) % M
            a = values[idx].mean()
            b = (values[idx] ** (-1 / (p - 1))).mean()
            best = max(best, a * b ** (p - 1))
    return best


@pytest.mark.parametrize("p", [1.5, 2.0, 3.0])
def test_ap_scan_matches_brute_force(p):
    values = HALF.sampled(Grid(128)).values.real * (1 + 0.3 * np.random.default_rng(0).random(128))
    assert _ap_scan(values, p, 5)[0][-1] == pytest.approx(_brute_ap(values, p, 5), rel=1e-12)


@pytest.mark.parametrize("c", [0.01, 1.0, 7.5, 1e4])
def test_ap_constant_of_constants(c):
    est = ap_constant(ConstantWeight(c), 2.0, 8, Grid(4096))
    assert abs(est.K_hat - 1.0) < 1e-9
    assert not est.diverging


def test_power_weight_below_analytic_lower_bound_never():
    # On [0, h]: avg |t|^a * avg |t|^-a = 1 / (1 - a^2) for p = 2.
    est = ap_constant(PowerWeight(0.5), 2.0, 12, Grid(65536))
    assert est.K_hat >= 1 / (1 - 0.25) * (1 - 1e-2)
    assert est.K_hat < 2.0
    assert not est.diverging


def test_power_weight_outside_a2_diverges():
    est = ap_constant(PowerWeight(1.5), 2.0, 12, Grid(65536))
    assert est.diverging
    assert "refinement" in est.reason or "cap" in est.reason


def test_cap_fires_on_non_integrable_dual():
    est = ap_constant(PowerWeight(1.5), 2.0, 4, Grid(4096), cap=10.0, refinement=1)
    assert est.diverging and "cap" in est.reason


def test_ap_rejects_zero_weight():
    with pytest.raises(ValueError):
        ap_constant(TabulatedWeight(np.array([0.0]), np.array([0.0])), 2.0, 4, Grid(256))


def test_ap_depth_monotone_and_argmax_interval():
    est = ap_constant(PowerWeight(0.5), 3.0, 10, Grid(16384))
    assert list(est.per_depth) == sorted(est.per_depth)
    center, length = est.argmax_interval
    assert -math.pi <= center < math.pi and length >= 1
    assert est.interval_family_depth == 10


@settings(max_examples=20, deadline=None)
@given(
    alpha=st.floats(-0.4, 0.4),
    p=st.sampled_from([1.5, 2.0, 3.0]),
    scale=st.floats(1e-3, 1e3),
)
def test_ap_properties(alpha, p, scale):
    g = Grid(4096)
    w = PowerWeight(alpha)
    base = ap_constant(w, p, 8, g)
    scaled = ap_constant(w * scale, p, 8, g)
    assert base.K_hat >= 1.0 - 1e-12
    assert scaled.K_hat == pytest.approx(base.K_hat, rel=1e-9)
    assert ap_constant(w, p, 9, g).K_hat >= base.K_hat


def test_polypower_mu_threshold():
    # P(t) = t^2 (double zero): |P|^mu is A_2 iff mu < 1/2.
    fine = Grid(2**18)
    low = ap_constant(PolyPowerWeight((0.0, 0.0, 1.0), 0.4), 2.0, 14, fine)
    high = ap_constant(PolyPowerWeight((0.0, 0.0, 1.0), 0.6), 2.0, 14, fine)
    assert not low.diverging
    assert high.K_hat >= 10 * low.K_hat


def test_muckenhoupt_estimator_from_samples():
    est = MuckenhouptEstimator(p=2, depth=8, grid_size=4096).fit(np.full(256, 3.0))
    assert est.K_hat_ == pytest.approx(1.0)
    assert est.diverging_ is False
