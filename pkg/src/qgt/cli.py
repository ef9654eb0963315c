"""Command-line interface: ``qgt <subcommand> [flags]``.

Subcommands: ap-constant, greedy-run, dirichlet-growth, democracy,
sign-uncond, fejer-recover, riesz-bounds, verdict.

Weight specs (``--weight``)
---------------------------
A spec is ``VARIANT`` followed by ``:``-separated ``key=value`` fields.
Numbers go through Python's ``float()``. Field order is free, but fields may
not repeat, and an unknown variant or field is a usage error.

``constant:c=C``
    ``w = C``, ``C > 0``.
``power:alpha=A``
    ``w(t) = |t|^A`` on [-pi, pi), extended periodically.
``polypower:coeffs=a0,a1,...,an:mu=MU``
    ``w(t) = |a0 + a1 t + ... + an t^n|^MU``, with coefficients in ascending
    degree. ``|P(-pi)|`` must equal ``|P(pi)|``.
``trig:a0=A0[:cosJ=AJ][:sinJ=BJ]...``
    ``w(t) = A0 + sum AJ cos(Jt) + BJ sin(Jt)``, ``J >= 1``; rejected if
    negative on an 8192-point grid.
``tabulated:file=PATH``
    Two-column CSV ``t,value``. Everything after ``file=`` is the path, which
    may contain ``:``. Evaluation uses the nearest tabulated point.

Ranges (``--N``, ``--n``, ``--m``)
----------------------------------
``a:b`` means the powers of two ``2^a, ..., 2^b``. A comma list
``16,32,100`` is taken literally.

Test functions (``greedy-run --function``)
------------------------------------------
``sawtooth:degree=D`` (``sum_{k<=D} sin(kt)/k``), ``sign``,
``abspower:alpha=A`` (``|t|^A``), ``exp:k=K`` (``e_K``),
``random:degree=D`` (unit-disc coefficients from ``--seed``).

Output goes to standard output unless ``--output`` is given. The
``QGT_GRID_SIZE`` environment variable overrides the default ``--grid``.
Exit status is 0 whenever a report was written, whatever its verdict.
"""

import argparse
import math
import os
import sys
from dataclasses import dataclass, field

import numpy as np

from . import experiments as ex
from ._parallel import rng_for
from .fourier import CoefficientVector, synthesize
from .greedy import DEFAULT_FLOOR, greedy_error_curve, truncation_error
from .grid import Grid, sample
from .report import ExperimentReport
from .weights import ap_constant, parse_weight_spec

__all__ = ["RunConfig", "parse_args", "build_parser", "run", "emit", "main"]

SUBCOMMANDS = (
    "ap-constant", "greedy-run", "dirichlet-growth", "democracy",
    "sign-uncond", "fejer-recover", "riesz-bounds", "verdict",
)

DEFAULT_GRID = 4096
DEFAULT_SEED = 1

DEFAULT_RANGES = {
    "greedy-run": "0:8",
    "dirichlet-growth": "4:10",
    "democracy": "4:8",
    "sign-uncond": "3:7",
    "fejer-recover": "5:9",
}


@dataclass
class RunConfig:
    subcommand: str
    weight_spec: str
    weight: object
    p: float
    grid_size: int
    seed: int = DEFAULT_SEED
    ranges: list = field(default_factory=list)
    p_list: list = field(default_factory=list)
    output_format: str = "csv"
    output_path: str = None
    depth: int = 12
    fine_grid: int = 65536
    trials: int = None
    u_list: list = field(default_factory=lambda: [0.0])
    max_freq: int = 64
    function: str = "sawtooth:degree=128"
    jobs: int = 1


def parse_range(text):
    """``"a:b"`` gives ``[2**a, ..., 2**b]``; otherwise a comma list of integers."""
    text = text.strip()
    if ":" in text:
        lo, _, hi = text.partition(":")
        a, b = int(lo), int(hi)
        if a < 0 or b < a:
            raise ValueError(f"bad dyadic range {text!r}")
        return [2**e for e in range(a, b + 1)]
    values = [int(v) for v in text.split(",") if v.strip()]
    if not values:
        raise ValueError("empty range")
    return values


def _float_list(text):
    values = []
    for item in text.split(","):
        item = item.strip().lower()
        sign = -1.0 if item.startswith("-") else 1.0
        body = item.lstrip("+-")
        values.append(sign * math.pi if body == "pi" else
                      sign * math.pi / 2 if body == "pi/2" else float(item))
    return values


def build_parser():
    env_grid = os.environ.get("QGT_GRID_SIZE")
    parser = argparse.ArgumentParser(
        prog="qgt",
        description="Greedy trigonometric approximation in weighted L^p spaces.",
    )
    sub = parser.add_subparsers(dest="subcommand", required=True, metavar="SUBCOMMAND")
    parser.subcommand_parsers = {}
    for name in SUBCOMMANDS:
        sp = sub.add_parser(name)
        parser.subcommand_parsers[name] = sp
        sp.add_argument("--weight", default="constant:c=1", help="weight spec")
        sp.add_argument("--p", default="2", help="exponent p > 1 (comma list for "
                        "dirichlet-growth)")
        sp.add_argument("--grid", default=env_grid or str(DEFAULT_GRID),
                        help="grid size M (even, >= 64); default from QGT_GRID_SIZE or 4096")
        sp.add_argument("--seed", type=int, default=DEFAULT_SEED)
        sp.add_argument("--format", dest="output_format", choices=("csv", "json"),
                        default="csv")
        sp.add_argument("--output", dest="output_path", default=None)
        sp.add_argument("--jobs", type=int, default=1, help="worker threads")
        if name == "ap-constant":
            sp.add_argument("--depth", type=int, default=12)
            sp.add_argument("--fine-grid", type=int, default=65536)
        if name in DEFAULT_RANGES:
            flag = "--m" if name == "greedy-run" else "--N"
            aliases = ["--n"] if name == "democracy" else []
            sp.add_argument(flag, *aliases, dest="range", default=DEFAULT_RANGES[name],
                            help="dyadic 'a:b' or comma list")
        if name in ("democracy", "sign-uncond", "riesz-bounds"):
            sp.add_argument("--trials", type=int, default=None)
        if name == "fejer-recover":
            sp.add_argument("--u", default="0", help="comma list of points (pi, pi/2 allowed)")
        if name == "riesz-bounds":
            sp.add_argument("--max-freq", type=int, default=64)
        if name == "greedy-run":
            sp.add_argument("--function", default="sawtooth:degree=128")
    return parser


def parse_args(argv=None):
    """Parse and validate ``argv`` into a :class:`RunConfig`.

    Invalid input exits with status 2 and a message naming the flag.
    """
    parser = build_parser()
    args = parser.parse_args(argv)
    sp = parser.subcommand_parsers[args.subcommand]

    try:
        grid_size = int(args.grid)
    except ValueError:
        sp.error(f"--grid: not an integer: {args.grid!r}")
    if grid_size < 64 or grid_size % 2:
        sp.error(f"--grid: grid size must be even and at least 64, got {grid_size}")

    try:
        p_list = _float_list(args.p)
    except ValueError:
        sp.error(f"--p: not a number: {args.p!r}")
    for p in p_list:
        if not (p > 1 and math.isfinite(p)):
            sp.error(f"--p: p must exceed 1, got {p:g}")
    if len(p_list) > 1 and args.subcommand != "dirichlet-growth":
        sp.error("--p: a list of exponents is only accepted by dirichlet-growth")

    try:
        weight = parse_weight_spec(args.weight)
    except (ValueError, OSError) as exc:
        sp.error(f"--weight: {exc}")

    config = RunConfig(
        subcommand=args.subcommand,
        weight_spec=args.weight,
        weight=weight,
        p=p_list[0],
        p_list=p_list,
        grid_size=grid_size,
        seed=args.seed,
        output_format=args.output_format,
        output_path=args.output_path,
        jobs=max(1, args.jobs),
    )
    if hasattr(args, "range"):
        try:
            config.ranges = parse_range(args.range)
        except ValueError as exc:
            sp.error(f"--N/--m: {exc}")
        if any(v < 0 for v in config.ranges):
            sp.error("--N/--m: values must be nonnegative")
    if hasattr(args, "depth"):
        if args.depth < 1:
            sp.error("--depth: must be at least 1")
        if args.fine_grid < 64 or args.fine_grid % 2:
            sp.error("--fine-grid: must be even and at least 64")
        config.depth, config.fine_grid = args.depth, args.fine_grid
    if getattr(args, "trials", None) is not None:
        if args.trials < 2:
            sp.error("--trials: must be at least 2")
        config.trials = args.trials
    if hasattr(args, "u"):
        try:
            config.u_list = _float_list(args.u)
        except ValueError:
            sp.error(f"--u: bad point list {args.u!r}")
    if hasattr(args, "max_freq"):
        config.max_freq = args.max_freq
    if hasattr(args, "function"):
        config.function = args.function
    return config


def make_function(spec, seed=DEFAULT_SEED):
    """Callable test function for ``greedy-run``; grammar in the module docstring."""
    name, _, rest = spec.partition(":")
    fields = dict(item.split("=", 1) for item in rest.split(":") if item)
    if name == "sawtooth":
        D = int(fields.get("degree", 128))
        k = np.arange(1, D + 1)
        return lambda t: np.sin(np.outer(t, k)) @ (1.0 / k)
    if name == "sign":
        return np.sign
    if name == "abspower":
        alpha = float(fields["alpha"])
        return lambda t: np.abs(t) ** alpha
    if name == "exp":
        K = int(fields["k"])
        return lambda t: np.exp(1j * K * t) / math.sqrt(2 * math.pi)
    if name == "random":
        D = int(fields.get("degree", 32))
        rng = rng_for(seed, D)
        freqs = np.arange(-D, D + 1)
        coeffs = np.sqrt(rng.random(freqs.size)) * np.exp(2j * np.pi * rng.random(freqs.size))
        return lambda t: synthesize(CoefficientVector(freqs, coeffs), Grid(t.size)).values
    raise ValueError(f"unknown test function {spec!r}")


def _greedy_run(config, grid):
    f = sample(make_function(config.function, config.seed), grid)
    m_values = sorted(set([0, *config.ranges]))
    curve = dict(greedy_error_curve(f, config.weight, config.p, max(m_values)))
    trunc = truncation_error(f, config.weight, config.p)
    return ExperimentReport(
        "greedy-run",
        dict(weight=config.weight.spec, p=config.p, grid=grid.size, seed=config.seed,
             function=config.function, floor=DEFAULT_FLOOR),
        ["m", "error"],
        [dict(m=m, error=curve[m]) for m in m_values],
        notes=f"truncation_error={trunc:.12g}; errors measured against the sampled function",
    )


def _ap_report(config):
    est = ap_constant(config.weight, config.p, config.depth, Grid(config.fine_grid))
    rows = [dict(depth=d, K_hat=k) for d, k in enumerate(est.per_depth)]
    return ExperimentReport(
        "ap-constant",
        dict(weight=config.weight.spec, p=config.p, depth=config.depth,
             grid=config.fine_grid),
        ["depth", "K_hat"],
        rows,
        notes=est.reason or "no divergence detected",
        summary=dict(K_hat=est.K_hat, coarse_K_hat=est.coarse_K_hat, diverging=est.diverging,
                     argmax_center=est.argmax_interval[0],
                     argmax_length=est.argmax_interval[1]),
    )


def run(config):
    """Execute the experiment described by ``config`` and return its report."""
    grid = Grid(config.grid_size)
    w, p, seed, jobs = config.weight, config.p, config.seed, config.jobs
    name = config.subcommand
    if name == "ap-constant":
        return _ap_report(config)
    if name == "greedy-run":
        return _greedy_run(config, grid)
    if name == "dirichlet-growth":
        return ex.dirichlet_growth(w, config.p_list, config.ranges, grid, jobs)
    if name == "democracy":
        return ex.democracy(w, p, config.ranges, config.trials or 8, seed, grid, jobs)
    if name == "sign-uncond":
        return ex.sign_unconditionality(w, p, config.ranges, config.trials or 64, seed, grid,
                                        n_jobs=jobs)
    if name == "fejer-recover":
        return ex.fejer_weight_recovery(w, config.u_list, config.ranges, grid, jobs)
    if name == "riesz-bounds":
        return ex.riesz_bounds(w, config.max_freq, config.trials or 200, seed, grid, jobs)
    if name == "verdict":
        return ex.quasi_greedy_verdict(w, p, ex.VerdictConfig(grid=config.grid_size, seed=seed),
                                       jobs)
    raise ValueError(f"unknown subcommand {name!r}")


def emit(report, output_format="csv", path=None):
    """Write ``report`` to ``path`` (stdout when ``None``); return the exit status."""
    text = report.to_json() if output_format == "json" else report.to_csv()
    if path is None:
        sys.stdout.write(text)
        sys.stdout.flush()
        return 0
    try:
        with open(path, "w", newline="") as fh:
            fh.write(text)
    except OSError as exc:
        print(f"qgt: cannot write {path}: {exc}", file=sys.stderr)
        return 1
    return 0


def main(argv=None):
    config = parse_args(argv)
    try:
        report = run(config)
    except ValueError as exc:
        print(f"qgt {config.subcommand}: {exc}", file=sys.stderr)
        return 2
    return emit(report, config.output_format, config.output_path)


if __name__ == "__main__":
    sys.exit(main())
