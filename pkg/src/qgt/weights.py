"""Periodic weight families and a brute-force Muckenhoupt A_p estimator.

All weights are 2pi-periodic: arguments are reduced into [-pi, pi) before the
symbolic formula is applied, so ``PowerWeight(a)`` is ``|t|^a`` on the
fundamental interval, extended periodically.
"""

import csv
import math
from dataclasses import dataclass, field

import numpy as np

from ._validation import check_exponent, check_positive_int
from .grid import Grid, SampledFunction, wrap_angle

__all__ = [
    "Weight",
    "ConstantWeight",
    "PowerWeight",
    "PolyPowerWeight",
    "TrigWeight",
    "TabulatedWeight",
    "ScaledWeight",
    "ApEstimate",
    "evaluate",
    "parse_weight_spec",
    "ap_constant",
    "essential_bounds",
    "critical_points",
]

TRIG_VALIDATION_SIZE = 8192
DEFAULT_AP_GRID_SIZE = 65536
DEFAULT_CAP = 1e8


def _fmt(x):
    return repr(float(x))


class Weight:
    """Base class for nonnegative 2pi-periodic weights.

    Subclasses implement ``_formula`` on arguments already reduced to
    [-pi, pi) and ``spec``, the string accepted by :func:`parse_weight_spec`.
    """

    def _formula(self, t):
        raise NotImplementedError

    @property
    def spec(self):
        raise NotImplementedError

    def __call__(self, t):
        t = wrap_angle(t)
        with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
            return self._formula(t)

    def sampled(self, grid):
        """Weight samples on ``grid`` as a real-valued :class:`SampledFunction`."""
        return SampledFunction(grid, self(grid.nodes))

    def singular_points(self):
        """Points in [-pi, pi) where the weight vanishes or blows up, if known."""
        return ()

    def __mul__(self, c):
        return ScaledWeight(self, float(c))

    __rmul__ = __mul__

    def __str__(self):
        return self.spec


@dataclass(frozen=True)
class ConstantWeight(Weight):
    c: float = 1.0

    def __post_init__(self):
        if not (self.c > 0 and math.isfinite(self.c)):
            raise ValueError(f"constant weight needs 0 < c < inf, got {self.c}")

    def _formula(self, t):
        return np.full(np.shape(t), float(self.c))

    @property
    def spec(self):
        return f"constant:c={_fmt(self.c)}"


@dataclass(frozen=True)
class PowerWeight(Weight):
    """``|t|^alpha`` on [-pi, pi)."""

    alpha: float

    def _formula(self, t):
        return np.abs(t) ** float(self.alpha)

    @property
    def spec(self):
        return f"power:alpha={_fmt(self.alpha)}"

    def singular_points(self):
        return (0.0,) if self.alpha != 0 else ()


@dataclass(frozen=True)
class PolyPowerWeight(Weight):
    """``|P(t)|^mu`` with ``P`` given by ascending coefficients.

    Construction requires ``|P(-pi)| = |P(pi)|`` (relative tolerance 1e-9) so
    the periodic extension has no jump at +-pi.
    """

    coeffs: tuple
    mu: float

    def __post_init__(self):
        coeffs = tuple(float(a) for a in self.coeffs)
        while len(coeffs) > 1 and coeffs[-1] == 0.0:
            coeffs = coeffs[:-1]
        if not coeffs or not all(math.isfinite(a) for a in coeffs):
            raise ValueError("polynomial coefficients must be finite and nonempty")
        object.__setattr__(self, "coeffs", coeffs)
        poly = np.polynomial.Polynomial(coeffs)
        left, right = abs(poly(-np.pi)), abs(poly(np.pi))
        if abs(left - right) > 1e-9 * max(1.0, left, right):
            raise ValueError(
                f"|P(-pi)| = {left!r} differs from |P(pi)| = {right!r}; "
                "the weight would not be 2pi-periodic"
            )

    @property
    def degree(self):
        return len(self.coeffs) - 1

    def _formula(self, t):
        return np.abs(np.polynomial.polynomial.polyval(t, self.coeffs)) ** float(self.mu)

    @property
    def spec(self):
        return f"polypower:coeffs={','.join(_fmt(a) for a in self.coeffs)}:mu={_fmt(self.mu)}"

    def singular_points(self):
        if self.mu == 0 or self.degree == 0:
            return ()
        roots = np.polynomial.Polynomial(self.coeffs).roots()
        real = roots[np.abs(roots.imag) < 1e-12].real
        inside = real[(real >= -np.pi) & (real < np.pi)]
        return tuple(sorted(set(float(r) for r in inside)))


@dataclass(frozen=True)
class TrigWeight(Weight):
    """``a0 + sum_j cos[j-1] cos(jt) + sin[j-1] sin(jt)``, checked nonnegative."""

    a0: float
    cos: tuple = ()
    sin: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "cos", tuple(float(a) for a in self.cos))
        object.__setattr__(self, "sin", tuple(float(b) for b in self.sin))
        values = self(Grid(TRIG_VALIDATION_SIZE).nodes)
        if not np.all(np.isfinite(values)) or values.min() < 0:
            raise ValueError(
                f"trigonometric weight is negative on the validation grid "
                f"(min {values.min()!r})"
            )

    def _formula(self, t):
        out = np.full(np.shape(t), float(self.a0))
        for j, a in enumerate(self.cos, start=1):
            out = out + a * np.cos(j * t)
        for j, b in enumerate(self.sin, start=1):
            out = out + b * np.sin(j * t)
        return out

    @property
    def spec(self):
        parts = [f"trig:a0={_fmt(self.a0)}"]
        parts += [f"cos{j}={_fmt(a)}" for j, a in enumerate(self.cos, 1) if a != 0]
        parts += [f"sin{j}={_fmt(b)}" for j, b in enumerate(self.sin, 1) if b != 0]
        return ":".join(parts)


@dataclass(frozen=True, eq=False)
class TabulatedWeight(Weight):
    """Weight given by samples at points ``t``; evaluated at the nearest point.

    Distance is measured periodically, so values near +-pi wrap correctly.
    No interpolation is done, which keeps A_p estimates and quadrature
    consistent with the table.
    """

    t: np.ndarray = field(repr=False)
    values: np.ndarray = field(repr=False)
    source: str = ""

    def __post_init__(self):
        t = wrap_angle(np.asarray(self.t, dtype=float).ravel())
        values = np.asarray(self.values, dtype=float).ravel()
        if t.size == 0 or t.size != values.size:
            raise ValueError("tabulated weight needs equally many t and value entries")
        if not np.all(np.isfinite(values)) or np.any(values < 0):
            raise ValueError("tabulated weight values must be finite and nonnegative")
        order = np.argsort(t, kind="stable")
        object.__setattr__(self, "t", t[order])
        object.__setattr__(self, "values", values[order])

    @classmethod
    def from_grid(cls, grid, values):
        return cls(grid.nodes, values, source=f"grid{grid.size}")

    @classmethod
    def from_csv(cls, path):
        """Read a two-column ``t,value`` CSV; a non-numeric first row is a header."""
        ts, vs = [], []
        with open(path, newline="") as fh:
            for i, row in enumerate(csv.reader(fh)):
                if not row or row[0].lstrip().startswith("#"):
                    continue
                try:
                    t, v = float(row[0]), float(row[1])
                except (ValueError, IndexError):
                    if i == 0:
                        continue
                    raise ValueError(f"{path}: bad row {i + 1}: {row!r}") from None
                ts.append(t)
                vs.append(v)
        return cls(np.array(ts), np.array(vs), source=str(path))

    def _formula(self, t):
        t = np.asarray(t, dtype=float)
        idx = np.searchsorted(self.t, t)
        n = self.t.size
        lo = (idx - 1) % n
        hi = idx % n
        d_lo = np.abs(wrap_angle(t - self.t[lo]))
        d_hi = np.abs(wrap_angle(self.t[hi] - t))
        return np.where(d_hi < d_lo, self.values[hi], self.values[lo])

    @property
    def spec(self):
        return f"tabulated:file={self.source}"


@dataclass(frozen=True)
class ScaledWeight(Weight):
    base: Weight
    factor: float

    def __post_init__(self):
        if not (self.factor > 0 and math.isfinite(self.factor)):
            raise ValueError(f"scale factor must be positive and finite, got {self.factor}")

    def _formula(self, t):
        return self.factor * self.base._formula(t)

    @property
    def spec(self):
        return f"{self.base.spec}*{_fmt(self.factor)}"

    def singular_points(self):
        return self.base.singular_points()


def evaluate(w, t):
    """Pointwise value of ``w`` at ``t`` (reduced mod 2pi); may be ``inf`` at a singularity."""
    out = w(t)
    return float(out) if np.ndim(out) == 0 else out


def _parse_fields(tokens, spec):
    fields = {}
    for token in tokens:
        key, sep, value = token.partition("=")
        if not sep or not key:
            raise ValueError(f"malformed field {token!r} in weight spec {spec!r}")
        if key in fields:
            raise ValueError(f"duplicate field {key!r} in weight spec {spec!r}")
        fields[key] = value
    return fields


def _take_float(fields, key, spec):
    try:
        return float(fields.pop(key))
    except KeyError:
        raise ValueError(f"weight spec {spec!r} is missing field {key!r}") from None
    except ValueError:
        raise ValueError(f"field {key!r} in weight spec {spec!r} is not a number") from None


def parse_weight_spec(spec):
    """Build a :class:`Weight` from its command-line string.

    The grammar is documented in :mod:`qgt.cli`.
    """
    spec = spec.strip()
    variant, _, rest = spec.partition(":")
    if variant == "tabulated":
        if not rest.startswith("file=") or len(rest) == len("file="):
            raise ValueError(f"tabulated weight needs 'file=PATH', got {spec!r}")
        return TabulatedWeight.from_csv(rest[len("file="):])
    fields = _parse_fields(rest.split(":") if rest else [], spec)
    if variant == "constant":
        weight = ConstantWeight(_take_float(fields, "c", spec))
    elif variant == "power":
        weight = PowerWeight(_take_float(fields, "alpha", spec))
    elif variant == "polypower":
        raw = fields.pop("coeffs", None)
        if raw is None:
            raise ValueError(f"weight spec {spec!r} is missing field 'coeffs'")
        try:
            coeffs = tuple(float(a) for a in raw.split(","))
        except ValueError:
            raise ValueError(f"bad coefficient list {raw!r} in {spec!r}") from None
        weight = PolyPowerWeight(coeffs, _take_float(fields, "mu", spec))
    elif variant == "trig":
        a0 = _take_float(fields, "a0", spec)
        harmonics = {"cos": {}, "sin": {}}
        for key in list(fields):
            kind, order = key[:3], key[3:]
            if kind in harmonics and order.isdigit() and int(order) >= 1:
                harmonics[kind][int(order)] = _take_float(fields, key, spec)
        top = max([0, *harmonics["cos"], *harmonics["sin"]])
        cos = tuple(harmonics["cos"].get(j, 0.0) for j in range(1, top + 1))
        sin = tuple(harmonics["sin"].get(j, 0.0) for j in range(1, top + 1))
        weight = TrigWeight(a0, cos, sin)
    else:
        raise ValueError(f"unknown weight variant {variant!r} in {spec!r}")
    if fields:
        raise ValueError(f"unknown field(s) {sorted(fields)} in weight spec {spec!r}")
    return weight


def essential_bounds(w, probe_grid=None):
    """Grid approximation ``(min, max)`` of the essential infimum and supremum of ``w``.

    For the built-in families, which are continuous away from finitely many
    points, the node extrema converge to the essential bounds as the grid
    is refined.
    """
    probe_grid = probe_grid or Grid(TRIG_VALIDATION_SIZE)
    values = np.asarray(w(probe_grid.nodes), dtype=float)
    return float(values.min()), float(values.max())


def critical_points(w, grid):
    """Known singular points of ``w`` plus the grid argmin and argmax, deduplicated."""
    values = np.asarray(w(grid.nodes), dtype=float)
    points = list(w.singular_points())
    points += [float(grid.nodes[np.argmin(values)]), float(grid.nodes[np.argmax(values)])]
    out = []
    for u in points:
        if all(abs(wrap_angle(u - v)) > grid.spacing for v in out):
            out.append(float(u))
    return out


@dataclass(frozen=True)
class ApEstimate:
    """Result of :func:`ap_constant`.

    ``K_hat`` is the largest A_p quotient found; ``per_depth[l]`` is the
    running maximum after interval lengths down to ``2pi * 2^-l``.
    ``coarse_K_hat`` is the same scan on a grid ``refinement`` times coarser,
    used to detect growth under refinement.
    """

    p: float
    K_hat: float
    argmax_interval: tuple
    interval_family_depth: int
    diverging: bool
    per_depth: tuple = ()
    coarse_K_hat: float = float("nan")
    fine_grid_size: int = 0
    reason: str = ""


def _ap_scan(values, p, depth):
    """Running maximum of the A_p quotient over the dyadic, quarter-shifted family."""
    M = values.size
    with np.errstate(divide="ignore", over="ignore"):
        dual = values ** (-1.0 / (p - 1.0))
    prefix_w = np.concatenate(([0.0], np.cumsum(np.concatenate((values, values)))))
    prefix_d = np.concatenate(([0.0], np.cumsum(np.concatenate((dual, dual)))))
    best, best_at = -np.inf, (0, M)
    running = []
    for level in range(depth + 1):
        n = max(1, int(round(M / 2**level)))
        step = max(1, n // 4)
        starts = np.arange(0, M, step)
        avg_w = (prefix_w[starts + n] - prefix_w[starts]) / n
        avg_d = (prefix_d[starts + n] - prefix_d[starts]) / n
        with np.errstate(invalid="ignore", over="ignore"):
            quotient = avg_w * avg_d ** (p - 1.0)
        # 0 * inf = 0 on intervals where w vanishes identically
        quotient = np.where(avg_w == 0.0, 0.0, quotient)
        quotient = np.where(np.isnan(quotient), np.inf, quotient)
        j = int(np.argmax(quotient))
        if quotient[j] > best:
            best, best_at = float(quotient[j]), (int(starts[j]), n)
        running.append(best)
    return running, best_at


def ap_constant(
    w,
    p,
    depth=12,
    fine_grid=None,
    *,
    cap=DEFAULT_CAP,
    refinement=16,
    growth_factor=2.0,
):
    """Estimate the Muckenhoupt A_p constant of ``w`` by brute force.

    The quotient ``avg_I(w) * avg_I(w^(-1/(p-1)))^(p-1)`` is evaluated from
    prefix sums of the samples on ``fine_grid`` for intervals of length
    ``2pi * 2^-l`` (``l = 0..depth``) whose left ends step by a quarter
    length. Intervals wrap across +-pi.

    A fixed grid always yields a finite number, so divergence is judged by
    three tests, any of which sets ``diverging``:

    * the estimate exceeds ``cap`` (this includes non-integrable samples);
    * the running maximum jumps by more than ``growth_factor`` at the last depth;
    * the estimate grows by more than ``growth_factor`` when the grid is
      refined ``refinement``-fold. A_p weights converge under refinement,
      while a non-integrable ``w^(-1/(p-1))`` makes the discrete sums grow
      like a power of the grid size.

    Returns
    -------
    ApEstimate
    """
    p = check_exponent(p)
    depth = check_positive_int(depth, "depth")
    fine_grid = fine_grid or Grid(DEFAULT_AP_GRID_SIZE)
    values = np.asarray(w(fine_grid.nodes), dtype=float)
    if np.any(values < 0) or np.any(np.isnan(values)):
        raise ValueError("weight samples must be nonnegative")
    if not np.any(values > 0):
        raise ValueError("weight vanishes on the whole grid")

    running, (start, n) = _ap_scan(values, p, depth)
    K_hat = running[-1]
    delta = fine_grid.spacing
    center = float(wrap_angle(-np.pi + (start + n / 2) * delta))
    reasons = []
    if not K_hat <= cap:
        reasons.append(f"estimate exceeds cap {cap:g}")
    if depth >= 1 and running[-1] > growth_factor * running[-2]:
        reasons.append(f"grew by more than {growth_factor:g}x at the last depth")

    coarse = float("nan")
    coarse_size = fine_grid.size // refinement
    if refinement > 1 and coarse_size >= 64 and coarse_size % 2 == 0:
        coarse_values = np.asarray(w(Grid(coarse_size).nodes), dtype=float)
        coarse = _ap_scan(coarse_values, p, depth)[0][-1]
        if np.isfinite(K_hat) and K_hat > growth_factor * coarse:
            reasons.append(
                f"grew by more than {growth_factor:g}x under {refinement}x grid refinement"
            )

    return ApEstimate(
        p=p,
        K_hat=float(K_hat),
        argmax_interval=(center, float(n * delta)),
        interval_family_depth=depth,
        diverging=bool(reasons),
        per_depth=tuple(running),
        coarse_K_hat=float(coarse),
        fine_grid_size=fine_grid.size,
        reason="; ".join(reasons),
    )
