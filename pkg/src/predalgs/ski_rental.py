"""Rent-or-buy with a forecast of the season length.

Skis cost b to buy and 1 per unit time to rent; the season ends at an
unknown time x.  A forecast y picks between two buy dates: trust it
(y >= b) and buy early at lambda b, or distrust it (y < b) and buy late
at beta b with beta = 1 + rho (1/lambda - 1).  Smaller lambda leans
harder on the forecast; rho interpolates the distrusting branch between
break-even (beta = 1) and fully defensive (beta = 1/lambda).

``theorem3_bound`` certifies the worst-case cost ratio pointwise in the
forecast error.  When only the probability Q of the forecast landing on
the correct side of b is known, ``theorem4_bound`` certifies the average
ratio, and ``corollary_lambda_star`` picks the trust weight minimizing
that certificate at rho = 0.
"""

from __future__ import annotations

import math
from collections.abc import Sequence
from dataclasses import dataclass, field

from .sampling import RatioStats, SeededStream


@dataclass(frozen=True)
class SkiConfig:
    """Buy cost, trust weight, and distrust spread, with the derived buy factor.

    beta always satisfies 1 <= beta <= 1/lam.  lam = 0 (buy immediately
    when trusting) is meaningful only with rho = 0, where beta degenerates
    to 1; that corner is what a perfectly reliable forecast selects, so it
    is allowed, while lam = 0 with rho > 0 has no finite distrusting buy
    date and is rejected.
    """

    b: float
    lam: float
    rho: float = 0.0
    beta: float = field(init=False)

    def __post_init__(self) -> None:
        if not self.b > 0.0:
            raise ValueError(f"buy cost must be positive, got {self.b!r}")
        if not 0.0 <= self.lam <= 1.0:
            raise ValueError(f"trust weight must lie in [0, 1], got {self.lam!r}")
        if not 0.0 <= self.rho <= 1.0:
            raise ValueError(f"distrust spread must lie in [0, 1], got {self.rho!r}")
        if self.lam == 0.0 and self.rho != 0.0:
            raise ValueError("trust weight 0 requires spread 0")
        if self.rho == 0.0:
            beta = 1.0
        else:
            beta = 1.0 + self.rho * (1.0 / self.lam - 1.0)
        object.__setattr__(self, "beta", beta)


@dataclass(frozen=True)
class SkiOutcome:
    """Resolved season: buy date, cost paid, offline optimum, and forecast error.

    Both policy branches buy at a finite date, so no outcome here carries
    a never-buys sentinel; math.inf would represent one if a pure-renting
    branch were ever added.
    """

    buy_time: float
    cost: float
    opt: float
    ratio: float
    eta: float


@dataclass(frozen=True)
class PredictionModelQ:
    """Side-agreement forecast model.

    With probability q the forecast lands on the same side of b as the
    true season length; the policy reads only the side, so one
    representative value per side pins the model down completely.
    """

    q: float
    y_same: float
    y_opposite: float

    def __post_init__(self) -> None:
        if not 0.5 <= self.q <= 1.0:
            raise ValueError(
                f"side agreement probability must lie in [1/2, 1], got {self.q!r}"
            )


def side_model(x: float, b: float, q: float) -> PredictionModelQ:
    """Representative forecasts for a season length: 2b and b/2, side-matched."""
    if not x > 0.0:
        raise ValueError(f"season length must be positive, got {x!r}")
    if x >= b:
        return PredictionModelQ(q, 2.0 * b, 0.5 * b)
    return PredictionModelQ(q, 0.5 * b, 2.0 * b)


def buy_time(y: float, config: SkiConfig) -> float:
    """Buy date selected by the forecast side; y = b counts as trusting."""
    if y >= config.b:
        return config.lam * config.b
    return config.beta * config.b


def _side_ratio(x: float, trusting: bool, b: float, lam: float, beta: float) -> float:
    # Cost ratio given only the forecast's side, shared with the sampling
    # kernels; the branch structure must match cost() exactly.
    buy_at = lam * b if trusting else beta * b
    cost_paid = x if x < buy_at else buy_at + b
    opt = x if x < b else b
    return cost_paid / opt


def cost(x: float, y: float, config: SkiConfig) -> SkiOutcome:
    """Resolve a season against a forecast: rent until the buy date, then buy."""
    if not x > 0.0:
        raise ValueError(f"season length must be positive, got {x!r}")
    bt = buy_time(y, config)
    paid = x if x < bt else bt + config.b
    opt = x if x < config.b else config.b
    return SkiOutcome(bt, paid, opt, paid / opt, abs(x - y))


def theorem3_bound(x: float, y: float, config: SkiConfig) -> float:
    """Certified worst-case cost ratio at a given forecast error.

    min(1 + 1/lam, (1 + lam) + (1 + lam/rho) eta / min(x, b)).  The
    smoothness term divides by rho, so a spread of zero keeps it only for
    an exact forecast; otherwise the plain robustness term stands alone.
    """
    if not x > 0.0:
        raise ValueError(f"season length must be positive, got {x!r}")
    eta = abs(x - y)
    lam = config.lam
    rho = config.rho
    robust = math.inf if lam == 0.0 else 1.0 + 1.0 / lam
    if rho == 0.0:
        if eta == 0.0:
            return min(robust, 1.0 + lam)
        return robust
    opt = x if x < config.b else config.b
    smooth = (1.0 + lam) + (1.0 + lam / rho) * (eta / opt)
    return min(robust, smooth)


def exact_average_ratio(
    x: float, config: SkiConfig, model: PredictionModelQ
) -> float:
    """Expected cost ratio under the side-agreement model, computed exactly.

    The policy reads only 1{y >= b}, so the expectation collapses to a
    two-point mixture of the representative forecasts.
    """
    same = cost(x, model.y_same, config).ratio
    opposite = cost(x, model.y_opposite, config).ratio
    return model.q * same + (1.0 - model.q) * opposite


def theorem4_bound(config: SkiConfig, q: float) -> float:
    """Certified average-ratio bound under side agreement q.

    max(2 + (1/lam - 1)((1-q) rho - q lam), 1 + (1-q)/lam).  At the
    lam = 0 corner (rho = 0 forced) the expressions continue to 2 - q and,
    for q < 1, an infinite second term.
    """
    if not 0.5 <= q <= 1.0:
        raise ValueError(
            f"side agreement probability must lie in [1/2, 1], got {q!r}"
        )
    lam = config.lam
    rho = config.rho
    if lam == 0.0:
        first = 2.0 - q
        second = 1.0 if q == 1.0 else math.inf
    else:
        first = 2.0 + (1.0 / lam - 1.0) * ((1.0 - q) * rho - q * lam)
        second = 1.0 + (1.0 - q) / lam
    return first if first > second else second


def corollary_lambda_star(q: float) -> float:
    """Trust weight minimizing the rho = 0 average certificate."""
    if not 0.5 <= q <= 1.0:
        raise ValueError(
            f"side agreement probability must lie in [1/2, 1], got {q!r}"
        )
    a = 1.0 / q - 1.0
    return 0.5 * math.sqrt(a * (1.0 / q + 3.0)) - 0.5 * a


def corollary_bound(q: float) -> float:
    """Average certificate at the optimal trust weight: (3-q)/2 + sqrt((1-q)(1+3q))/2."""
    if not 0.5 <= q <= 1.0:
        raise ValueError(
            f"side agreement probability must lie in [1/2, 1], got {q!r}"
        )
    return (3.0 - q) / 2.0 + 0.5 * math.sqrt((1.0 - q) * (1.0 + 3.0 * q))


def prior_bound(q: float) -> float:
    """Reference certificate 1 + 2 sqrt(q(1-q)) that the corollary improves on."""
    if not 0.5 <= q <= 1.0:
        raise ValueError(
            f"side agreement probability must lie in [1/2, 1], got {q!r}"
        )
    return 1.0 + 2.0 * math.sqrt(q * (1.0 - q))


def thm3_grid(b: float, steps: int = 500) -> list[float]:
    """Season/forecast grid {b/100, 2b/100, ..., 5b} used by the bound checks."""
    if steps < 1:
        raise ValueError(f"steps must be positive, got {steps!r}")
    return [b * (i / 100.0) for i in range(1, steps + 1)]


@dataclass(frozen=True)
class Figure5Row:
    sigma: float
    rho: float
    worst_mean: float
    se: float | None
    n: int
    robustness: float


@dataclass(frozen=True)
class Figure6Row:
    q: float
    rho: float
    mean: float
    se: float | None
    n: int


@dataclass(frozen=True)
class CorollaryRow:
    q: float
    lambda_star: float
    corollary_bound: float
    prior_bound: float


def _figure5_cell(args: tuple) -> tuple[int, float, float]:
    b, lam, beta, sigma, x, seed, stream_id, trials = args
    from . import kernels

    return kernels.ski_fig5_cell(b, lam, beta, sigma, x, seed, stream_id, trials)


def gaussian_sweep(
    config: SkiConfig,
    sigma_grid: Sequence[float],
    x_grid: Sequence[float],
    trials: int,
    stream: SeededStream,
    jobs: int = 1,
) -> list[Figure5Row]:
    """Worst mean cost ratio against Gaussian forecast noise.

    Forecasts are y = x + noise with noise ~ N(0, sigma^2), unclamped: a
    negative forecast simply lands on the distrusting side.  Each row
    reports the largest mean ratio over the season grid; the adversary
    picks the season length, and for cost ratios larger is worse.
    """
    if trials < 1:
        raise ValueError(f"trials must be at least 1, got {trials!r}")
    if not sigma_grid or not x_grid:
        raise ValueError("noise and season grids must be nonempty")
    from ._parallel import map_cells

    cells = []
    for s_idx, sigma in enumerate(sigma_grid):
        if sigma < 0.0:
            raise ValueError(f"noise width must be nonnegative, got {sigma!r}")
        for x_idx, x in enumerate(x_grid):
            cells.append(
                (
                    config.b,
                    config.lam,
                    config.beta,
                    sigma,
                    x,
                    stream.seed,
                    stream.stream_id + s_idx * len(x_grid) + x_idx,
                    trials,
                )
            )
    results = map_cells(_figure5_cell, cells, jobs)
    robust = math.inf if config.lam == 0.0 else 1.0 + 1.0 / config.lam
    rows = []
    for s_idx, sigma in enumerate(sigma_grid):
        worst: RatioStats | None = None
        for x_idx in range(len(x_grid)):
            n, mean, m2 = results[s_idx * len(x_grid) + x_idx]
            if worst is None or mean > worst.mean:
                worst = RatioStats.from_moments(n, mean, m2)
        assert worst is not None
        rows.append(
            Figure5Row(sigma, config.rho, worst.mean, worst.se, worst.n, robust)
        )
    return rows


def _figure6_cell(args: tuple) -> tuple[int, float, float]:
    b, lam, beta, q, seed, stream_id, trials = args
    from . import kernels

    return kernels.ski_fig6_cell(b, lam, beta, q, seed, stream_id, trials)


def bernoulli_sweep(
    configs: Sequence[SkiConfig],
    q_grid: Sequence[float],
    trials: int,
    stream: SeededStream,
    jobs: int = 1,
) -> list[Figure6Row]:
    """Mean cost ratio over random seasons under side-agreement forecasts.

    Seasons are drawn uniformly from [1, 4b]; each trial's forecast lands
    on the correct side of b with probability q.  The draw stream for a
    given q is shared across the spread configs, so comparing their means
    is a paired comparison with the season noise cancelled.
    """
    if trials < 1:
        raise ValueError(f"trials must be at least 1, got {trials!r}")
    if not configs or not q_grid:
        raise ValueError("config and q grids must be nonempty")
    b = configs[0].b
    for config in configs:
        if config.b != b:
            raise ValueError("all configs in one sweep must share the buy cost")
    from ._parallel import map_cells

    cells = []
    for config in configs:
        for q_idx, q in enumerate(q_grid):
            if not 0.5 <= q <= 1.0:
                raise ValueError(
                    f"side agreement probability must lie in [1/2, 1], got {q!r}"
                )
            cells.append(
                (
                    config.b,
                    config.lam,
                    config.beta,
                    q,
                    stream.seed,
                    stream.stream_id + q_idx,
                    trials,
                )
            )
    results = map_cells(_figure6_cell, cells, jobs)
    rows = []
    i = 0
    for config in configs:
        for q in q_grid:
            n, mean, m2 = results[i]
            stats = RatioStats.from_moments(n, mean, m2)
            rows.append(Figure6Row(q, config.rho, stats.mean, stats.se, stats.n))
            i += 1
    return rows


def corollary_rows(q_grid: Sequence[float]) -> list[CorollaryRow]:
    """Optimal trust weight and both certificates across an agreement grid."""
    return [
        CorollaryRow(q, corollary_lambda_star(q), corollary_bound(q), prior_bound(q))
        for q in q_grid
    ]
