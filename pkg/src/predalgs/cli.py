"""Command-line front end: named experiment sweeps and invariant checks.

Each experiment subcommand runs one figure-style sweep and writes CSV
with a fixed header and a single ``#`` metadata comment recording the
parameters and seed.  Output is byte-identical for a fixed parameter set
and seed, whatever the parallelism, so diffing two runs is a valid
reproducibility check.

Exit statuses: 0 success, 2 usage error, 3 verification failure, 4 I/O
error.
"""

from __future__ import annotations

import argparse
import csv
import math
import os
import sys
from typing import Callable, Sequence

from . import kernels, line_search, one_max, ski_rental
from .sampling import SeededStream

DEFAULT_TRIALS = 100_000
DEFAULT_SEED = 1729

FIG2_POINTS = 101
FIG3_PRICES = 64
FIG3_GRID = 512

HEADERS = {
    "line-figure2": "y_over_x,rho,mean,se,n,thm1_bound",
    "onemax-figure3": "sigma,rho,worst_mean,se,n,robustness_floor",
    "ski-figure5": "sigma,rho,worst_mean,se,n,robustness_bound",
    "ski-figure6": "Q,rho,mean,se,n",
    "ski-corollary-figure1": "Q,lambda_star,corollary_bound,prior_bound",
}


def parse_grid(text: str) -> list[float]:
    """Expand comma lists and inclusive start:stop:step ranges to floats."""
    values: list[float] = []
    for token in text.split(","):
        token = token.strip()
        if not token:
            raise ValueError(f"empty grid token in {text!r}")
        if ":" in token:
            parts = token.split(":")
            if len(parts) != 3:
                raise ValueError(f"range must be start:stop:step, got {token!r}")
            start, stop, step = (float(p) for p in parts)
            if step <= 0.0:
                raise ValueError(f"range step must be positive, got {token!r}")
            if stop < start:
                raise ValueError(f"range stop below start in {token!r}")
            count = int(math.floor((stop - start) / step + 0.5)) + 1
            for i in range(count):
                v = start + i * step
                if v > stop:
                    # float drift past the endpoint; snap rather than drop
                    v = stop
                values.append(v)
        else:
            values.append(float(token))
    return values


def _positive_int(text: str) -> int:
    value = int(text)
    if value < 1:
        raise ValueError(f"must be at least 1, got {text!r}")
    return value


def _fmt(value: float | int | None) -> str:
    return "" if value is None else str(value)


def _grid_text(values: Sequence[float]) -> str:
    return ",".join(str(v) for v in values)


def _emit(
    path: str | None, comment: str, experiment: str, rows: list[list[str]]
) -> None:
    header = HEADERS[experiment].split(",")

    def write_to(out) -> None:
        out.write(comment + "\r\n")
        writer = csv.writer(out)
        writer.writerow(header)
        writer.writerows(rows)

    if path is None:
        write_to(sys.stdout)
    else:
        with open(path, "w", newline="") as handle:
            write_to(handle)


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="predalgs",
        description="Experiment sweeps and invariant checks for the "
        "forecast-guided search and rent-or-buy algorithms.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p: argparse.ArgumentParser) -> None:
        p.add_argument("--trials", type=_positive_int, default=DEFAULT_TRIALS)
        p.add_argument("--seed", type=int, default=DEFAULT_SEED)
        p.add_argument("--out", default=None, help="CSV path (default stdout)")
        p.add_argument(
            "--jobs",
            type=_positive_int,
            default=os.cpu_count() or 1,
            help="worker processes (1 forces serial)",
        )

    p2 = sub.add_parser(
        "line-figure2", help="expected walk ratio against hint position"
    )
    p2.add_argument("--x", type=float, default=100.0)
    p2.add_argument("--b", type=float, default=2.5)
    p2.add_argument("--rho", type=parse_grid, default=None)
    common(p2)

    p3 = sub.add_parser(
        "onemax-figure3", help="adversarial payoff fraction against forecast noise"
    )
    p3.add_argument("--lambda", dest="lam", type=float, default=0.1)
    p3.add_argument("--theta", type=float, default=5.0)
    p3.add_argument("--rho", type=parse_grid, default=None)
    p3.add_argument("--sigma", type=parse_grid, default=None)
    common(p3)

    p5 = sub.add_parser(
        "ski-figure5", help="worst season cost ratio against Gaussian forecast noise"
    )
    p5.add_argument("--b", type=float, default=10.0)
    p5.add_argument("--lambda", dest="lam", type=float, default=0.5)
    p5.add_argument("--rho", type=parse_grid, default=None)
    p5.add_argument("--sigma", type=parse_grid, default=None)
    p5.add_argument("--x", dest="x_grid", type=parse_grid, default=None)
    common(p5)

    p6 = sub.add_parser(
        "ski-figure6", help="average cost ratio under side-agreement forecasts"
    )
    p6.add_argument("--b", type=float, default=10.0)
    p6.add_argument("--lambda", dest="lam", type=float, default=0.5)
    p6.add_argument("--rho", type=parse_grid, default=None)
    p6.add_argument("--Q", dest="q_grid", type=parse_grid, default=None)
    common(p6)

    pc = sub.add_parser(
        "ski-corollary-figure1",
        help="optimal trust weight and certificates across agreement levels",
    )
    pc.add_argument("--Q", dest="q_grid", type=parse_grid, default=None)
    pc.add_argument("--out", default=None, help="CSV path (default stdout)")

    pv = sub.add_parser("verify", help="run invariant suites, pass/fail per check")
    pv.add_argument(
        "suite", choices=["line-oracle", "onemax-pareto", "ski-bounds", "all"]
    )

    return parser


def _cmd_line_figure2(args: argparse.Namespace) -> int:
    rho_grid = args.rho if args.rho is not None else [0.05, 0.5, 5.0]
    for rho in rho_grid:
        if rho < 0.0:
            raise ValueError(f"smoothing scale must be nonnegative, got {rho!r}")
    rows = line_search.figure2_sweep(
        args.x, args.b, rho_grid, FIG2_POINTS, args.trials, args.seed, args.jobs
    )
    comment = (
        f"# experiment=line-figure2 x={args.x} b={args.b}"
        f" rho={_grid_text(rho_grid)} points={FIG2_POINTS}"
        f" trials={args.trials} seed={args.seed}"
    )
    out_rows = [
        [
            str(row.y_over_x),
            str(row.rho),
            str(row.mean),
            _fmt(row.se),
            str(row.n),
            _fmt(row.bound),
        ]
        for row in rows
    ]
    _emit(args.out, comment, "line-figure2", out_rows)
    return 0


def _cmd_onemax_figure3(args: argparse.Namespace) -> int:
    theta = args.theta
    rho_grid = args.rho if args.rho is not None else [0.0, 0.5, 1.0]
    if args.sigma is not None:
        sigma_grid = args.sigma
    else:
        sigma_grid = [0.0, 0.01, 0.05] + [theta * (k / 20.0) for k in range(1, 21)]
    for sigma in sigma_grid:
        if not 0.0 <= sigma <= theta:
            raise ValueError(
                f"noise width must lie in [0, {theta}], got {sigma!r}"
            )
    rows: list[one_max.Figure3Row] = []
    for i, rho in enumerate(rho_grid):
        config = one_max.OneMaxConfig(args.lam, theta, rho)
        stream = SeededStream(args.seed, i * len(sigma_grid) * FIG3_GRID)
        rows.extend(
            one_max.figure3_sweep(
                config,
                sigma_grid,
                args.trials,
                stream,
                n_prices=FIG3_PRICES,
                grid_points=FIG3_GRID,
                jobs=args.jobs,
            )
        )
    comment = (
        f"# experiment=onemax-figure3 lambda={args.lam} theta={theta}"
        f" rho={_grid_text(rho_grid)} sigma={_grid_text(sigma_grid)}"
        f" n_prices={FIG3_PRICES} grid_points={FIG3_GRID}"
        f" trials={args.trials} seed={args.seed}"
    )
    out_rows = [
        [
            str(row.sigma),
            str(row.rho),
            str(row.worst_mean),
            _fmt(row.se),
            str(row.n),
            str(row.floor),
        ]
        for row in rows
    ]
    _emit(args.out, comment, "onemax-figure3", out_rows)
    return 0


def _cmd_ski_figure5(args: argparse.Namespace) -> int:
    b = args.b
    rho_grid = args.rho if args.rho is not None else [0.0, 0.5, 1.0]
    if args.sigma is not None:
        sigma_grid = args.sigma
    else:
        sigma_grid = [0.0, 0.01 * b, 0.05 * b] + [b * (k / 10.0) for k in range(1, 21)]
    x_grid = (
        args.x_grid
        if args.x_grid is not None
        else [b * (i / 20.0) for i in range(1, 101)]
    )
    rows: list[ski_rental.Figure5Row] = []
    for i, rho in enumerate(rho_grid):
        config = ski_rental.SkiConfig(b, args.lam, rho)
        stream = SeededStream(args.seed, i * len(sigma_grid) * len(x_grid))
        rows.extend(
            ski_rental.gaussian_sweep(
                config, sigma_grid, x_grid, args.trials, stream, jobs=args.jobs
            )
        )
    comment = (
        f"# experiment=ski-figure5 b={b} lambda={args.lam}"
        f" rho={_grid_text(rho_grid)} sigma={_grid_text(sigma_grid)}"
        f" x={_grid_text(x_grid)} trials={args.trials} seed={args.seed}"
    )
    out_rows = [
        [
            str(row.sigma),
            str(row.rho),
            str(row.worst_mean),
            _fmt(row.se),
            str(row.n),
            str(row.robustness),
        ]
        for row in rows
    ]
    _emit(args.out, comment, "ski-figure5", out_rows)
    return 0


def _cmd_ski_figure6(args: argparse.Namespace) -> int:
    rho_grid = args.rho if args.rho is not None else [0.0, 0.5, 1.0]
    q_grid = (
        args.q_grid
        if args.q_grid is not None
        else [(10 + i) / 20.0 for i in range(11)]
    )
    configs = [ski_rental.SkiConfig(args.b, args.lam, rho) for rho in rho_grid]
    rows = ski_rental.bernoulli_sweep(
        configs, q_grid, args.trials, SeededStream(args.seed, 0), jobs=args.jobs
    )
    comment = (
        f"# experiment=ski-figure6 b={args.b} lambda={args.lam}"
        f" rho={_grid_text(rho_grid)} Q={_grid_text(q_grid)}"
        f" trials={args.trials} seed={args.seed}"
    )
    out_rows = [
        [str(row.q), str(row.rho), str(row.mean), _fmt(row.se), str(row.n)]
        for row in rows
    ]
    _emit(args.out, comment, "ski-figure6", out_rows)
    return 0


def _cmd_ski_corollary(args: argparse.Namespace) -> int:
    q_grid = (
        args.q_grid
        if args.q_grid is not None
        else [(100 + i) / 200.0 for i in range(101)]
    )
    rows = ski_rental.corollary_rows(q_grid)
    comment = f"# experiment=ski-corollary-figure1 Q={_grid_text(q_grid)}"
    out_rows = [
        [
            str(row.q),
            str(row.lambda_star),
            str(row.corollary_bound),
            str(row.prior_bound),
        ]
        for row in rows
    ]
    _emit(args.out, comment, "ski-corollary-figure1", out_rows)
    return 0


Check = tuple[str, float, float, bool]


def _verify_line_oracle() -> list[Check]:
    checks: list[Check] = []
    for b in (2.0, 2.5, 3.0, 5.0):
        worst, peak, cases = kernels.ls_oracle_scan(b, 1.0, 0.5, 399, 30)
        cap = line_search.robustness_bound(b) + 1e-9
        checks.append(
            (
                f"line-oracle b={b:g} walk vs closed form ({cases} cases)",
                worst,
                1e-9,
                worst <= 1e-9,
            )
        )
        checks.append((f"line-oracle b={b:g} ratio cap", peak, cap, peak <= cap))
    return checks


def _verify_onemax_pareto() -> list[Check]:
    lams = [i / 20.0 for i in range(21)]
    thetas = (1.5, 2.0, 4.0, 10.0)
    worst_res = 0.0
    worst_mono = 0.0
    worst_rc = 0.0
    for theta in thetas:
        prev: one_max.ParetoPoint | None = None
        for lam in lams:
            point = one_max.solve_pareto(lam, theta)
            c, r = point.consistency, point.robustness
            worst_res = max(worst_res, abs(1.0 / c - theta * r))
            worst_res = max(worst_res, abs(1.0 / c - (lam / r + 1.0 - lam)))
            worst_rc = max(worst_rc, r - c)
            if prev is not None:
                worst_mono = max(worst_mono, c - prev.consistency)
                worst_mono = max(worst_mono, prev.robustness - r)
            prev = point
    return [
        ("onemax-pareto identity residuals", worst_res, 1e-12, worst_res <= 1e-12),
        ("onemax-pareto front monotone", worst_mono, 1e-12, worst_mono <= 1e-12),
        ("onemax-pareto robustness <= consistency", worst_rc, 1e-12, worst_rc <= 1e-12),
    ]


def _verify_ski_bounds() -> list[Check]:
    b = 10.0
    lams = [i / 10.0 for i in range(1, 11)]
    rhos = (0.0, 0.25, 0.5, 1.0)
    qs = [(10 + i) / 20.0 for i in range(11)]
    xs = ski_rental.thm3_grid(b)

    worst3 = -math.inf
    for lam in lams:
        for rho in rhos:
            config = ski_rental.SkiConfig(b, lam, rho)
            worst3 = max(
                worst3, kernels.ski_thm3_scan(b, lam, rho, config.beta, 500)
            )

    worst4 = -math.inf
    for lam in lams:
        for rho in rhos:
            config = ski_rental.SkiConfig(b, lam, rho)
            for q in qs:
                bound = ski_rental.theorem4_bound(config, q)
                for x in xs:
                    model = ski_rental.side_model(x, b, q)
                    avg = ski_rental.exact_average_ratio(x, config, model)
                    worst4 = max(worst4, avg - bound)

    worst_c = -math.inf
    worst_range = 0.0
    for i in range(101):
        q = (100 + i) / 200.0
        lam_star = ski_rental.corollary_lambda_star(q)
        worst_c = max(
            worst_c, ski_rental.corollary_bound(q) - ski_rental.prior_bound(q)
        )
        worst_range = max(worst_range, -lam_star, lam_star - 1.0)

    return [
        ("ski-bounds theorem3_bound exhaustive grid", worst3, 1e-9, worst3 <= 1e-9),
        ("ski-bounds theorem4_bound dominance grid", worst4, 1e-9, worst4 <= 1e-9),
        (
            "ski-bounds corollary_bound vs prior_bound",
            worst_c,
            1e-12,
            worst_c <= 1e-12,
        ),
        (
            "ski-bounds optimal trust weight in [0, 1]",
            worst_range,
            1e-12,
            worst_range <= 1e-12,
        ),
    ]


def _cmd_verify(args: argparse.Namespace) -> int:
    checks: list[Check] = []
    if args.suite in ("line-oracle", "all"):
        checks.extend(_verify_line_oracle())
    if args.suite in ("onemax-pareto", "all"):
        checks.extend(_verify_onemax_pareto())
    if args.suite in ("ski-bounds", "all"):
        checks.extend(_verify_ski_bounds())
    failed = 0
    for name, measured, bound, ok in checks:
        status = "pass" if ok else "fail"
        print(f"{name}: measured={measured:.6g} bound={bound:.6g} {status}")
        if not ok:
            failed += 1
    print(f"{len(checks)} checks, {failed} failed")
    return 0 if failed == 0 else 3


_COMMANDS: dict[str, Callable[[argparse.Namespace], int]] = {
    "line-figure2": _cmd_line_figure2,
    "onemax-figure3": _cmd_onemax_figure3,
    "ski-figure5": _cmd_ski_figure5,
    "ski-figure6": _cmd_ski_figure6,
    "ski-corollary-figure1": _cmd_ski_corollary,
    "verify": _cmd_verify,
}


def main(argv: Sequence[str] | None = None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else 2
    try:
        return _COMMANDS[args.command](args)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 4


if __name__ == "__main__":
    sys.exit(main())
