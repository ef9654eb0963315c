"""Numerical experiments probing whether the trigonometric system is
quasi-greedy in a weighted space ``L^p(w)``.

Every experiment returns an :class:`~qgt.report.ExperimentReport`. Reports
depend only on their parameters and seed: per-row randomness is keyed by
``(seed, row)``, and ``n_jobs`` only changes scheduling, never output.

All verdicts are numerical evidence from finite grids and finite ``N``,
with thresholds stated in :class:`VerdictConfig`.
"""

import itertools
import math
from dataclasses import asdict, dataclass

import numpy as np

from ._parallel import PRNG_NAME, pmap, rng_for
from ._validation import check_exponent, check_positive_int
from .fourier import (
    CoefficientVector,
    INV_SQRT_2PI,
    dirichlet_kernel,
    natural_frequencies,
    synthesize,
)
from .grid import Grid, SampledFunction, weighted_lp_norm
from .report import ExperimentReport, format_number
from .weights import ap_constant, critical_points, essential_bounds, evaluate

__all__ = [
    "VerdictConfig",
    "loglog_slope",
    "holder_theta",
    "sign_unconditionality",
    "democracy",
    "dirichlet_growth",
    "fejer_weight_recovery",
    "riesz_bounds",
    "quasi_greedy_verdict",
]

LEBESGUE_ASYMPTOTIC = 4.0 / math.pi**2


def _plist(values):
    return ",".join(format_number(v) for v in values)


def loglog_slope(x, y):
    """Least-squares slope of ``log y`` against ``log x``."""
    x = np.log(np.asarray(x, dtype=float))
    y = np.log(np.asarray(y, dtype=float))
    return float(np.polyfit(x, y, 1)[0])


def holder_theta(p):
    """Interpolation exponent between L^1, L^2 and L^p.

    ``||f||_p <= ||f||_1^theta ||f||_2^(1-theta)`` with ``theta = 2/p - 1`` for
    ``1 < p < 2``; ``||f||_2 <= ||f||_1^theta ||f||_p^(1-theta)`` with
    ``theta = (p-2)/(2p-2)`` for ``p > 2``.
    """
    if p < 2:
        return 2.0 / p - 1.0
    return (p - 2.0) / (2.0 * p - 2.0)


def _basis_matrix(freqs, grid):
    return INV_SQRT_2PI * np.exp(1j * np.outer(grid.nodes, np.asarray(freqs)))


def _column_norms(values, weight, p, spacing):
    return (spacing * (np.abs(values) ** p * weight[:, None]).sum(axis=0)) ** (1.0 / p)


def _describe_set(spec):
    if isinstance(spec, (int, np.integer)):
        return f"block{int(spec)}", np.arange(1, int(spec) + 1)
    idx = np.asarray(sorted(set(int(j) for j in spec)))
    if idx.size == 0 or idx.min() < 1:
        raise ValueError("index sets must hold natural indices >= 1")
    return f"set{idx.size}", idx


def sign_unconditionality(w, p, set_spec, trials=64, seed=1, grid=None, exact_max=12, n_jobs=1):
    """Extremes of ``||sum_{k in A} eps_k e_{n_k}||_{p,w}`` over sign patterns.

    ``set_spec`` lists index sets: an integer ``N`` stands for the block
    ``{1..N}``, a sequence for explicit natural indices. Sets of size
    ``<= exact_max`` are enumerated exhaustively; larger ones use ``trials``
    random patterns with the all-plus pattern always included.
    """
    p = check_exponent(p)
    grid = grid or Grid()
    trials = check_positive_int(trials, "trials")
    if trials < 2:
        raise ValueError("trials must be at least 2")
    weight = np.asarray(w(grid.nodes), dtype=float)
    sets = [_describe_set(s) for s in set_spec]

    def one(item):
        row_id, (label, idx) = item
        n = idx.size
        basis = _basis_matrix(_freqs_of(idx), grid)
        if n <= exact_max:
            patterns = np.array(list(itertools.product((1.0, -1.0), repeat=n)))
            mode = "exact"
        else:
            rng = rng_for(seed, row_id)
            patterns = rng.choice((1.0, -1.0), size=(trials, n))
            patterns[0] = 1.0
            mode = "sampled"
        norms = np.concatenate([
            _column_norms(basis @ chunk.T, weight, p, grid.spacing)
            for chunk in np.array_split(patterns, max(1, len(patterns) // 256))
        ])
        return dict(
            set=label, size=n, min_norm=float(norms.min()), max_norm=float(norms.max()),
            mean_norm=float(norms.mean()), all_plus_norm=float(norms[0]),
            ratio=float(norms.max() / norms.min()), patterns=len(patterns), mode=mode,
        )

    rows = pmap(one, list(enumerate(sets)), n_jobs)
    report = ExperimentReport(
        "sign-uncond",
        dict(weight=w.spec, p=p, grid=grid.size, seed=seed, trials=trials,
             exact_max=exact_max, sets=_plist(label for label, _ in sets), prng=PRNG_NAME),
        ["set", "size", "min_norm", "max_norm", "mean_norm", "all_plus_norm", "ratio",
         "patterns", "mode"],
        rows,
        notes="Constant-coefficient sign unconditionality: bounded ratio max/min across |A| "
              "is necessary for a quasi-greedy basis.",
    )
    if len(rows) >= 2:
        report.summary = {"ratio_slope": loglog_slope(report.column("size"), report.column("ratio"))}
    return report


def _freqs_of(natural_idx):
    j = np.asarray(natural_idx, dtype=np.int64)
    return np.where(j % 2 == 0, -(j // 2), (j - 1) // 2)


def democracy(w, p, n_list, trials=8, seed=1, grid=None, n_jobs=1):
    """Norms of ``sum_{k in A} e_{n_k}`` over sets ``A`` of equal size ``n``.

    For each ``n``: the block ``{1..n}``, ``trials`` random ``n``-subsets of
    natural indices ``{1..min(n^2, M/2)}``, and the frequency progression
    ``{0, d, ..., (n-1)d}``. ``phi_hat`` is the largest norm seen, an
    estimate of the fundamental function.
    """
    p = check_exponent(p)
    grid = grid or Grid()
    M = grid.size
    n_list = [check_positive_int(n, "n") for n in n_list]
    for n in n_list:
        if 4 * n >= M:
            raise ValueError(f"n = {n} needs a grid larger than {4 * n} nodes")
    weight = np.asarray(w(grid.nodes), dtype=float)

    def norm_of(freqs):
        values = _basis_matrix(freqs, grid).sum(axis=1)
        return float(_column_norms(values[:, None], weight, p, grid.spacing)[0])

    def one(n):
        rng = rng_for(seed, n)
        block = norm_of(natural_frequencies(n))
        pool = min(n * n, M // 2)
        random_norms = [
            norm_of(_freqs_of(rng.choice(np.arange(1, pool + 1), size=n, replace=False)))
            for _ in range(trials)
        ]
        d = max(1, min(3, (M // 4 - 1) // max(n - 1, 1)))
        ap = norm_of(d * np.arange(n))
        phi = max(block, ap, *random_norms)
        root = math.sqrt(n)
        return dict(
            n=n, block_norm=block, min_random=min(random_norms), max_random=max(random_norms),
            ap_norm=ap, phi_hat=phi, phi_hat_over_sqrt_n=phi / root,
            block_over_sqrt_n=block / root,
        )

    rows = pmap(one, n_list, n_jobs)
    report = ExperimentReport(
        "democracy",
        dict(weight=w.spec, p=p, grid=grid.size, seed=seed, trials=trials,
             n=_plist(n_list), prng=PRNG_NAME),
        ["n", "block_norm", "min_random", "max_random", "ap_norm", "phi_hat",
         "phi_hat_over_sqrt_n", "block_over_sqrt_n"],
        rows,
        notes="A quasi-greedy trigonometric system needs ||sum_A e_k|| ~ |A|^(1/2) for every "
              "finite A; slopes are least-squares fits in log-log coordinates.",
    )
    if len(rows) >= 2:
        n = report.column("n")
        report.summary = {
            "block_slope": loglog_slope(n, report.column("block_norm")),
            "phi_slope": loglog_slope(n, report.column("phi_hat")),
        }
    return report


def dirichlet_growth(w, p_list, N_list, grid=None, n_jobs=1):
    """Weighted norms of the Dirichlet kernel ``D_N`` and the Hoelder interpolation check.

    Columns ``holder_slack_p<p>`` hold the right side minus the left side of
    the interpolation inequality (see :func:`holder_theta`); they are
    nonnegative up to rounding. ``lebesgue_constant`` is the unweighted
    ``(1/2pi) int |sum_k e^(i n_k t)| dt = ||D_N||_{L^1} / sqrt(2pi)``, whose
    slope against ``log N`` tends to ``4/pi^2``.
    """
    grid = grid or Grid()
    p_list = [check_exponent(p) for p in p_list]
    N_list = [check_positive_int(N, "N") for N in N_list]
    for N in N_list:
        if 4 * N >= grid.size:
            raise ValueError(f"N = {N} needs a grid larger than {4 * N} nodes")
    weight = w.sampled(grid)
    unit = SampledFunction(grid, np.ones(grid.size))
    sqrt_2pi = math.sqrt(2.0 * math.pi)

    def one(N):
        D = dirichlet_kernel(N, 0.0, grid)
        n1 = weighted_lp_norm(D, weight, 1)
        n2 = weighted_lp_norm(D, weight, 2)
        row = dict(N=N, norm_1w=n1, norm_2w=n2)
        for p in p_list:
            row[f"norm_p{format_number(p)}"] = weighted_lp_norm(D, weight, p)
        row["norm2sq_over_N"] = n2**2 / N
        for p in p_list:
            np_ = row[f"norm_p{format_number(p)}"]
            theta = holder_theta(p)
            if p < 2:
                slack = n1**theta * n2 ** (1 - theta) - np_
            elif p > 2:
                slack = n1**theta * np_ ** (1 - theta) - n2
            else:
                slack = 0.0
            row[f"holder_slack_p{format_number(p)}"] = slack
        lebesgue = weighted_lp_norm(D, unit, 1) / sqrt_2pi
        row["lebesgue_constant"] = lebesgue
        row["lebesgue_over_log"] = lebesgue / math.log(N) if N > 1 else float("nan")
        return row

    columns = ["N", "norm_1w", "norm_2w"]
    columns += [f"norm_p{format_number(p)}" for p in p_list]
    columns += ["norm2sq_over_N"]
    columns += [f"holder_slack_p{format_number(p)}" for p in p_list]
    columns += ["lebesgue_constant", "lebesgue_over_log"]
    rows = pmap(one, N_list, n_jobs)
    report = ExperimentReport(
        "dirichlet-growth",
        dict(weight=w.spec, p=_plist(p_list), grid=grid.size, N=_plist(N_list)),
        columns,
        rows,
        notes="If ||D_N||_{p,w} ~ N^(1/2) for some p != 2, interpolation forces "
              "||D_N||_{1,w} ~ N^(1/2), against the logarithmic Lebesgue constant.",
    )
    report.summary = _lebesgue_fit(rows)
    big = [r for r in rows if r["N"] >= 2]
    if len(big) >= 2:
        report.summary["norm_1w_slope"] = loglog_slope(
            [r["N"] for r in big], [r["norm_1w"] for r in big]
        )
    return report


def _lebesgue_fit(rows, min_N=16):
    """Slope and intercept of ``lebesgue_constant ~ a log N + b`` over ``N >= min_N``."""
    pts = [(math.log(r["N"]), r["lebesgue_constant"]) for r in rows if r["N"] >= min_N]
    if len(pts) < 2:
        return {}
    x, y = np.array(pts).T
    a, b = np.polyfit(x, y, 1)
    return {"lebesgue_slope": float(a), "lebesgue_intercept": float(b),
            "lebesgue_asymptotic": LEBESGUE_ASYMPTOTIC}


def fejer_average(w, u, N, grid):
    """``int (1/N) |D_N(t - u)|^2 w(t) dt`` by midpoint quadrature."""
    D = dirichlet_kernel(N, u, grid)
    weight = np.asarray(w(grid.nodes), dtype=float)
    return float(grid.spacing * np.sum(np.abs(D.values) ** 2 * weight) / N)


def fejer_weight_recovery(w, u_list, N_list, grid=None, n_jobs=1):
    """Recover ``w(u)`` as the limit of the Fejer-type averages ``F_N(u)``.

    ``(1/N)|D_N(t - u)|^2`` has unit mass and concentrates at ``u``, so
    ``F_N(u) -> w(u)`` at Lebesgue points of ``w``.
    """
    grid = grid or Grid()
    N_list = [check_positive_int(N, "N") for N in N_list]
    for N in N_list:
        if 8 * N >= grid.size:
            raise ValueError(f"N = {N} needs a grid larger than {8 * N} nodes")
    items = [(float(u), N) for u in u_list for N in N_list]

    def one(item):
        u, N = item
        F = fejer_average(w, u, N, grid)
        wu = evaluate(w, u)
        return dict(u=u, N=N, F_N=F, w_u=wu, abs_error=abs(F - wu))

    rows = pmap(one, items, n_jobs)
    report = ExperimentReport(
        "fejer-recover",
        dict(weight=w.spec, grid=grid.size, u=_plist(u_list), N=_plist(N_list)),
        ["u", "N", "F_N", "w_u", "abs_error"],
        rows,
        notes="Bounds c1^2 <= F_N(u) <= c2^2 uniform in N and u are necessary for a "
              "quasi-greedy system; F_N(u) -> w(u) at Lebesgue points.",
    )
    if len(N_list) >= 2:
        report.summary = {
            f"slope_u{format_number(u)}": loglog_slope(
                N_list, [max(r["F_N"], 1e-300) for r in rows if r["u"] == u]
            )
            for u in dict.fromkeys(float(u) for u in u_list)
        }
    return report


def riesz_bounds(w, max_freq, trials=200, seed=1, grid=None, n_jobs=1):
    """Ratios ``R = ||sum a_k e_k||_{2,w}^2 / sum |a_k|^2`` over test vectors.

    Even trials draw coefficients uniformly from the unit disc on
    ``|k| <= max_freq``. Odd trials are translated Fejer-type vectors
    ``a_k = e^(-iku) / sqrt(2 max_freq + 1)``, centred first at the critical
    points of ``w`` and then at random ``u``; these push ``R`` towards
    ``w(u)`` and so probe the sharpness of the bounds.
    """
    max_freq = check_positive_int(max_freq, "max_freq")
    trials = check_positive_int(trials, "trials")
    if trials < 10:
        raise ValueError("trials must be at least 10")
    grid = grid or Grid()
    if 2 * max_freq + 1 >= grid.size // 2:
        raise ValueError("max_freq too large for the grid")
    weight = w.sampled(grid)
    centers = critical_points(w, grid)
    freqs = np.arange(-max_freq, max_freq + 1)

    def one(trial):
        rng = rng_for(seed, trial)
        if trial % 2 == 0:
            coeffs = np.sqrt(rng.random(freqs.size)) * np.exp(2j * np.pi * rng.random(freqs.size))
            family = "random"
        else:
            j = trial // 2
            u = centers[j] if j < len(centers) else float(rng.uniform(-np.pi, np.pi))
            coeffs = np.exp(-1j * freqs * u) / math.sqrt(freqs.size)
            family = "concentrated"
        g = synthesize(CoefficientVector(freqs, coeffs), grid)
        R = weighted_lp_norm(g, weight, 2) ** 2 / float(np.sum(np.abs(coeffs) ** 2))
        return family, R

    results = pmap(one, range(trials), n_jobs)
    lower, upper = essential_bounds(w, grid)
    rows = []
    for family in ("random", "concentrated", "all"):
        Rs = [R for fam, R in results if family in ("all", fam)]
        rows.append(dict(family=family, trials=len(Rs), min_R=min(Rs), max_R=max(Rs),
                         ess_lower=lower, ess_upper=upper))
    return ExperimentReport(
        "riesz-bounds",
        dict(weight=w.spec, grid=grid.size, seed=seed, trials=trials, max_freq=max_freq,
             prng=PRNG_NAME),
        ["family", "trials", "min_R", "max_R", "ess_lower", "ess_upper"],
        rows,
        notes="Riesz basis iff ess inf w > 0 and ess sup w < inf; R is a weighted average "
              "of w, so ess_lower <= R <= ess_upper.",
    )


@dataclass(frozen=True)
class VerdictConfig:
    """Thresholds and sizes for :func:`quasi_greedy_verdict`.

    ``slope_tolerance``: a democracy block-norm slope (or ``||D_N||_{1,w}``
    slope) further than this from 1/2 counts as a violation of the
    ``|A|^(1/2)`` law. ``decay_slope`` / ``growth_slope``: ``F_N(u)`` slopes
    below / above these witness ``w`` unbounded below / above near ``u``.
    """

    grid: int = 8192
    ap_grid: int = 65536
    ap_depth: int = 12
    democracy_n: tuple = (16, 32, 64, 128, 256)
    democracy_trials: int = 4
    dirichlet_N: tuple = (16, 32, 64, 128, 256, 512)
    slope_tolerance: float = 0.1
    fejer_grid: int = 65536
    fejer_N: tuple = (32, 64, 128, 256, 512, 1024)
    decay_slope: float = -0.2
    growth_slope: float = 0.2
    riesz_max_freq: int = 64
    riesz_trials: int = 200
    riesz_floor: float = 1e-3
    sign_sets: tuple = (16, 32, 64, 128)
    sign_trials: int = 64
    sign_slope: float = 0.1
    seed: int = 1


def quasi_greedy_verdict(w, p, config=None, n_jobs=1):
    """Composite check of the necessary conditions for a quasi-greedy system.

    1. A_p estimate: a diverging estimate witnesses failure (not even a
       Schauder basis).
    2. ``p != 2``: democracy and Dirichlet-kernel growth; a departure from
       the ``N^(1/2)`` law witnesses failure.
    3. ``p == 2``: Fejer-type recovery at the critical points of ``w``; decay
       or growth of ``F_N(u)`` witnesses failure. Otherwise Riesz ratios and
       sign unconditionality must stay bounded for a consistent verdict.

    Anything not settled by the thresholds in ``config`` is ``inconclusive``.
    """
    p = check_exponent(p)
    config = config or VerdictConfig()
    grid = Grid(config.grid)
    checks, subreports = [], []

    def record(step, check, statistic, threshold, fired):
        checks.append(dict(step=step, check=check, statistic=statistic,
                           threshold=threshold, outcome="violation" if fired else "ok"))
        return fired

    est = ap_constant(w, p, config.ap_depth, Grid(config.ap_grid))
    sub = ExperimentReport(
        "ap-constant",
        dict(weight=w.spec, p=p, depth=config.ap_depth, grid=config.ap_grid),
        ["K_hat", "coarse_K_hat", "center", "length", "diverging"],
        [dict(K_hat=est.K_hat, coarse_K_hat=est.coarse_K_hat, center=est.argmax_interval[0],
              length=est.argmax_interval[1], diverging=est.diverging)],
        notes=est.reason,
    )
    subreports.append(sub)
    verdict = None
    if record(1, "ap_diverging", est.K_hat, "cap or refinement growth", est.diverging):
        verdict = "witnesses-failure"
    elif p != 2:
        demo = democracy(w, p, config.democracy_n, config.democracy_trials, config.seed,
                         grid, n_jobs)
        dg = dirichlet_growth(w, [p], config.dirichlet_N, grid, n_jobs)
        subreports += [demo, dg]
        fired_demo = record(2, "democracy_block_slope", demo.summary["block_slope"],
                            f"0.5 +- {config.slope_tolerance:g}",
                            abs(demo.summary["block_slope"] - 0.5) > config.slope_tolerance)
        fired_l1 = record(2, "dirichlet_l1w_slope", dg.summary["norm_1w_slope"],
                          f">= {0.5 - config.slope_tolerance:g}",
                          dg.summary["norm_1w_slope"] < 0.5 - config.slope_tolerance)
        verdict = "witnesses-failure" if (fired_demo or fired_l1) else "inconclusive"
    else:
        probe = Grid(config.fejer_grid)
        centers = critical_points(w, probe)
        fr = fejer_weight_recovery(w, centers, config.fejer_N, probe, n_jobs)
        lower, upper = essential_bounds(w, probe)
        subreports.append(fr)
        failed = False
        for u in centers:
            slope = fr.summary[f"slope_u{format_number(u)}"]
            failed |= record(3, f"fejer_decay(u={u:.6g})", slope,
                             f">= {config.decay_slope:g}", slope < config.decay_slope)
            failed |= record(3, f"fejer_growth(u={u:.6g})", slope,
                             f"<= {config.growth_slope:g}", slope > config.growth_slope)
        record(3, "essential_lower", lower, "> 0 (informational)", False)
        record(3, "essential_upper", upper, "< inf (informational)", False)
        if failed:
            verdict = "witnesses-failure"
        else:
            rb = riesz_bounds(w, config.riesz_max_freq, config.riesz_trials, config.seed,
                              grid, n_jobs)
            su = sign_unconditionality(w, p, config.sign_sets, config.sign_trials,
                                       config.seed, grid, n_jobs=n_jobs)
            subreports += [rb, su]
            overall = rb.rows[-1]
            bad_riesz = record(3, "riesz_min_R", overall["min_R"], f">= {config.riesz_floor:g}",
                               overall["min_R"] < config.riesz_floor)
            bad_riesz |= record(3, "riesz_max_R", overall["max_R"],
                                f"<= {1 / config.riesz_floor:g}",
                                overall["max_R"] > 1 / config.riesz_floor)
            slope = su.summary["ratio_slope"]
            bad_sign = record(3, "sign_ratio_slope", slope, f"<= {config.sign_slope:g}",
                              slope > config.sign_slope)
            verdict = "inconclusive" if (bad_riesz or bad_sign) else "consistent-with-quasi-greedy"

    params = dict(weight=w.spec, p=p)
    params.update({k: (_plist(v) if isinstance(v, tuple) else v)
                   for k, v in asdict(config).items()})
    return ExperimentReport(
        "verdict",
        params,
        ["step", "check", "statistic", "threshold", "outcome"],
        checks,
        verdict=verdict,
        notes="Numerical evidence, not proof. Step 1 instantiates the A_p characterization "
              "of Schauder bases; step 2 the |A|^(1/2) democracy law and the logarithmic "
              "Lebesgue constant; step 3 the two-sided bound on w and the Riesz property.",
        subreports=subreports,
    )


__all__ += ["fejer_average", "LEBESGUE_ASYMPTOTIC"]
