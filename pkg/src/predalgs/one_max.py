"""Best-price selection with an untrusted forecast of the maximum.

Prices from [1, theta] arrive one at a time; exactly one must be accepted,
and an unaccepted final price is forced.  The decision rule is a single
threshold: take the first price at or above it.  A forecast y of the
eventual maximum shifts the threshold inside a band whose ends are set by
the trust weight lambda, producing a guaranteed fraction c of the maximum
when the forecast is right and a fraction r against any prices at all.
The (c, r) pair traces a Pareto front as lambda moves from full trust to
none; ``solve_pareto`` evaluates it in closed form.

The deterministic rule is brittle: a maximum a hair below the threshold
1/r forfeits nearly everything.  ``randomized_threshold`` smooths this by
drawing the threshold from a geometric band below 1/r at spread rho, and
``exact_expected_ratio`` integrates the resulting guarantee exactly.
"""

from __future__ import annotations

import math
from collections.abc import Sequence
from dataclasses import dataclass

from .sampling import RatioStats, SeededStream


@dataclass(frozen=True)
class OneMaxConfig:
    """Trust weight, price ceiling, and threshold spread.

    lam = 0 follows the forecast blindly; lam = 1 ignores it.  rho = 0
    reproduces the deterministic rule through the same code path.
    """

    lam: float
    theta: float
    rho: float = 0.0

    def __post_init__(self) -> None:
        if not 0.0 <= self.lam <= 1.0:
            raise ValueError(f"trust weight must lie in [0, 1], got {self.lam!r}")
        if not self.theta > 1.0:
            raise ValueError(f"price ceiling must exceed 1, got {self.theta!r}")
        if not self.rho >= 0.0:
            raise ValueError(f"threshold spread must be nonnegative, got {self.rho!r}")


@dataclass(frozen=True)
class ParetoPoint:
    """Guarantee pair: fraction with a correct forecast, fraction always."""

    consistency: float
    robustness: float


@dataclass(frozen=True)
class PriceSequence:
    """Nonempty prices with their maximum carried alongside."""

    prices: tuple[float, ...]
    p_star: float

    def __post_init__(self) -> None:
        if not self.prices:
            raise ValueError("price sequence must be nonempty")
        if min(self.prices) < 1.0:
            raise ValueError("prices must be at least 1")
        if self.p_star != max(self.prices):
            raise ValueError(
                f"carried maximum {self.p_star!r} does not match the prices"
            )


@dataclass(frozen=True)
class ThresholdRealization:
    """One draw of the smoothed rule.

    ``log_scaled_max`` is -ln(robustness * p_star), a property of the
    instance rather than the forecast, so it stays None here; the exact
    expectation evaluator computes it where the true maximum is known.
    """

    deterministic: float
    applied: float
    draw: float
    log_scaled_max: float | None = None


def solve_pareto(lam: float, theta: float) -> ParetoPoint:
    """Closed-form guarantee pair for a trust weight.

    The pair is the unique solution of 1/c = theta r together with
    1/c = lam / r + 1 - lam, a quadratic in r.  The endpoints are returned
    directly rather than through the quadratic so that lam = 0 gives
    (1, 1/theta) and lam = 1 gives (1/sqrt(theta), 1/sqrt(theta)) with no
    rounding residue.
    """
    if not 0.0 <= lam <= 1.0:
        raise ValueError(f"trust weight must lie in [0, 1], got {lam!r}")
    if not theta > 1.0:
        raise ValueError(f"price ceiling must exceed 1, got {theta!r}")
    if lam == 0.0:
        return ParetoPoint(1.0, 1.0 / theta)
    if lam == 1.0:
        shared = 1.0 / math.sqrt(theta)
        return ParetoPoint(shared, shared)
    u = 1.0 - lam
    d = math.sqrt(u * u + 4.0 * theta * lam)
    return ParetoPoint(2.0 / (u + d), (u + d) / (2.0 * theta))


def _phi(y: float, lam: float, c: float, r: float) -> float:
    # Three forecast bands: below 1/c the rule asks for 1/c regardless,
    # from 1/r up it asks for 1/r, and in between it interpolates.
    if y < 1.0 / c:
        return 1.0 / c
    if y < 1.0 / r:
        return lam / r + (1.0 - lam) * c * y
    return 1.0 / r


def threshold(lam: float, y: float, pareto: ParetoPoint) -> float:
    """Deterministic acceptance threshold for a forecast.

    Continuous at the lower band edge 1/c by the defining identities of
    the Pareto pair; at the upper edge 1/r it jumps, which is exactly the
    brittleness the randomized rule is built to remove.
    """
    if not 0.0 <= lam <= 1.0:
        raise ValueError(f"trust weight must lie in [0, 1], got {lam!r}")
    if not y >= 1.0:
        raise ValueError(f"forecast must be at least 1, got {y!r}")
    return _phi(y, lam, pareto.consistency, pareto.robustness)


def randomized_threshold(
    config: OneMaxConfig, y: float, pareto: ParetoPoint, u: float
) -> ThresholdRealization:
    """Smoothed threshold draw for a forecast in the trusting band.

    Forecasts below 1/r keep the deterministic value.  At or above it the
    threshold becomes exp(-rho u) / r, spanning [exp(-rho)/r, 1/r]; a
    spread of zero collapses the band back onto 1/r.
    """
    if not 0.0 < u <= 1.0:
        raise ValueError(f"unit draw must lie in (0, 1], got {u!r}")
    if not 1.0 <= y <= config.theta:
        raise ValueError(f"forecast must lie in [1, {config.theta}], got {y!r}")
    c = pareto.consistency
    r = pareto.robustness
    phi = _phi(y, config.lam, c, r)
    if y >= 1.0 / r:
        applied = math.exp(-config.rho * u) / r
    else:
        applied = phi
    return ThresholdRealization(phi, applied, u)


def run_instance(
    prices: PriceSequence | Sequence[float], threshold_value: float
) -> float:
    """Payoff of the rule: first price at or above the threshold, else the last."""
    seq = prices.prices if isinstance(prices, PriceSequence) else tuple(prices)
    if not seq:
        raise ValueError("price sequence must be nonempty")
    for p in seq:
        if p >= threshold_value:
            return p
    return seq[-1]


def _ramp_price(i: int, n: int, p_star: float) -> float:
    return 1.0 + ((i - 1.0) / (n - 1.0)) * (p_star - 1.0)


def _first_ramp_payoff(phi: float, p_star: float, n: int) -> float:
    # Payoff of the ramp-then-crash instance without materializing it.
    # The float index estimate can be off by one near grid boundaries, so
    # walk it onto the first ramp entry at or above the threshold.
    if phi <= 1.0:
        return 1.0
    if phi > p_star:
        return 1.0
    pos = (phi - 1.0) * ((n - 1.0) / (p_star - 1.0))
    i = 1 + int(math.ceil(pos))
    if i > n:
        i = n
    while i > 1 and _ramp_price(i - 1, n, p_star) >= phi:
        i -= 1
    while _ramp_price(i, n, p_star) < phi:
        i += 1
    return _ramp_price(i, n, p_star)


def adversarial_instance(
    p_star: float, n: int = 64, theta: float | None = None
) -> PriceSequence:
    """Evenly spaced climb from 1 to the maximum, then a crash back to 1.

    The ramp reaches p_star exactly (the spacing arithmetic is exact in
    floats for any practical ceiling), so the carried maximum is literal.
    The trailing 1 is what a threshold above p_star is forced to settle
    for.
    """
    if not p_star >= 1.0:
        raise ValueError(f"maximum price must be at least 1, got {p_star!r}")
    if theta is not None and p_star > theta:
        raise ValueError(f"maximum price {p_star!r} exceeds the ceiling {theta!r}")
    if n < 2:
        raise ValueError(f"ramp needs at least 2 prices, got {n!r}")
    prices = tuple(_ramp_price(i, n, p_star) for i in range(1, n + 1)) + (1.0,)
    return PriceSequence(prices, p_star)


def robustness_floor(rho: float, pareto: ParetoPoint) -> float:
    """Guaranteed expected fraction against any prices: ((1 - e^-rho)/rho) r."""
    if rho < 0.0:
        raise ValueError(f"threshold spread must be nonnegative, got {rho!r}")
    r = pareto.robustness
    if rho == 0.0:
        return r
    return ((1.0 - math.exp(-rho)) / rho) * r


def exact_expected_ratio(
    p_star: float, config: OneMaxConfig, pareto: ParetoPoint
) -> float:
    """Exact expected payoff fraction on the worst instance, trusting band.

    The worst instance pays the threshold itself when the draw lands at or
    below the maximum and the crash price 1 otherwise.  Substituting
    s = -ln(r p_star) splits the integral over the draw into three ranges:

      s <= 0:        c (1 - e^-rho) / rho
      s >= rho:      r (e^rho - 1) / rho
      0 < s < rho:   c (e^-s - e^-rho) / rho  +  r (e^s - 1) / rho

    The branch expressions agree at both seams.  A spread of zero gets the
    deterministic limit: c when the maximum reaches 1/r, else the crash
    fraction 1/p_star.
    """
    if not 1.0 <= p_star <= config.theta:
        raise ValueError(f"maximum must lie in [1, {config.theta}], got {p_star!r}")
    c = pareto.consistency
    r = pareto.robustness
    rho = config.rho
    if rho == 0.0:
        if p_star >= 1.0 / r:
            return c
        return 1.0 / p_star
    s = -math.log(r * p_star)
    if s <= 0.0:
        return c * (1.0 - math.exp(-rho)) / rho
    if s >= rho:
        return r * (math.exp(rho) - 1.0) / rho
    return c * (math.exp(-s) - math.exp(-rho)) / rho + r * (math.exp(s) - 1.0) / rho


def expected_ratio_mc(
    p_star: float,
    config: OneMaxConfig,
    pareto: ParetoPoint,
    trials: int,
    stream: SeededStream,
) -> RatioStats:
    """Monte-Carlo companion of ``exact_expected_ratio``, same worst case.

    Each trial draws the threshold and scores the integrand directly:
    c e^{-rho u} when the draw crosses, the crash fraction r e^{rho u}
    otherwise.
    """
    if trials < 1:
        raise ValueError(f"trials must be at least 1, got {trials!r}")
    if config.rho == 0.0:
        raise ValueError("sampling needs a positive spread; rho = 0 is exact")
    if not 1.0 <= p_star <= config.theta:
        raise ValueError(f"maximum must lie in [1, {config.theta}], got {p_star!r}")
    from . import kernels

    c = pareto.consistency
    r = pareto.robustness
    s = -math.log(r * p_star)
    n, mean, m2 = kernels.om_gu_cell(
        c, r, config.rho, s, stream.seed, stream.stream_id, trials
    )
    return RatioStats.from_moments(n, mean, m2)


def lemma_bounds(
    y: float,
    p_star: float,
    eta: float,
    config: OneMaxConfig,
    pareto: ParetoPoint,
) -> float:
    """Certified lower bound on the expected payoff fraction.

    Piecewise in the forecast band, each piece degrading linearly in the
    relative forecast error eta / p_star, and never below the global
    robustness floor.  The middle band's slope carries a factor
    max(1, c/lam), so a trust weight of zero sends that band to the floor
    rather than dividing by zero; the trusting band at zero spread keeps c
    only for an exact forecast.
    """
    if not 1.0 <= y <= config.theta:
        raise ValueError(f"forecast must lie in [1, {config.theta}], got {y!r}")
    if not p_star >= 1.0:
        raise ValueError(f"maximum price must be at least 1, got {p_star!r}")
    if eta < 0.0:
        raise ValueError(f"forecast error must be nonnegative, got {eta!r}")
    c = pareto.consistency
    r = pareto.robustness
    lam = config.lam
    rho = config.rho
    floor = robustness_floor(rho, pareto)
    rel = eta / p_star
    if y < 1.0 / c:
        raw = c - c * rel
    elif y < 1.0 / r:
        if lam == 0.0:
            raw = floor
        else:
            slope = c / lam
            if slope < 1.0:
                slope = 1.0
            raw = c - (1.0 - lam) * slope * c * rel
    else:
        if rho > 0.0:
            raw = ((1.0 - math.exp(-rho)) / rho) * c - ((c - r) / rho) * rel
        else:
            raw = c if eta == 0.0 else floor
    return raw if raw > floor else floor


def p_star_grid(
    theta: float, rho: float, pareto: ParetoPoint, points: int = 512
) -> list[float]:
    """Evenly spaced maxima over [1, theta] with the two seams snapped in.

    The worst-case structure turns at 1/r and at e^-rho / r, so whichever
    of those lie inside the range replace their nearest grid neighbors.
    """
    if points < 2:
        raise ValueError(f"need at least 2 grid points, got {points!r}")
    step = (theta - 1.0) / (points - 1)
    values = [1.0 + i * step for i in range(points)]
    r = pareto.robustness
    for special in (1.0 / r, math.exp(-rho) / r):
        if 1.0 <= special <= theta:
            nearest = min(range(points), key=lambda i: abs(values[i] - special))
            values[nearest] = special
    values.sort()
    return values


@dataclass(frozen=True)
class Figure3Row:
    sigma: float
    rho: float
    worst_mean: float
    se: float | None
    n: int
    floor: float


def _figure3_cell(args: tuple) -> tuple[int, float, float]:
    lam, theta, c, r, rho, sigma, p_star, n_prices, seed, stream_id, trials = args
    from . import kernels

    return kernels.om_fig3_cell(
        lam, theta, c, r, rho, sigma, p_star, n_prices, seed, stream_id, trials
    )


def figure3_sweep(
    config: OneMaxConfig,
    sigma_grid: Sequence[float],
    trials: int,
    stream: SeededStream,
    n_prices: int = 64,
    grid_points: int = 512,
    jobs: int = 1,
) -> list[Figure3Row]:
    """Adversarial expected fraction against forecast noise, one spread value.

    For each noise width sigma the forecast is the true maximum plus
    uniform noise on [-sigma, sigma], clamped into [1, theta], and the
    reported value is the smallest mean fraction over the maximum's grid:
    the adversary picks the maximum, so smallest is worst.  Cell stream
    ids are assigned by (sigma, maximum) position, which keeps parallel
    runs byte-identical to serial ones.
    """
    if trials < 1:
        raise ValueError(f"trials must be at least 1, got {trials!r}")
    from ._parallel import map_cells

    pareto = solve_pareto(config.lam, config.theta)
    grid = p_star_grid(config.theta, config.rho, pareto, grid_points)
    floor = robustness_floor(config.rho, pareto)
    cells = []
    for s_idx, sigma in enumerate(sigma_grid):
        if sigma < 0.0:
            raise ValueError(f"noise width must be nonnegative, got {sigma!r}")
        for p_idx, p_star in enumerate(grid):
            cells.append(
                (
                    config.lam,
                    config.theta,
                    pareto.consistency,
                    pareto.robustness,
                    config.rho,
                    sigma,
                    p_star,
                    n_prices,
                    stream.seed,
                    stream.stream_id + s_idx * len(grid) + p_idx,
                    trials,
                )
            )
    results = map_cells(_figure3_cell, cells, jobs)
    rows = []
    for s_idx, sigma in enumerate(sigma_grid):
        worst: RatioStats | None = None
        for p_idx in range(len(grid)):
            n, mean, m2 = results[s_idx * len(grid) + p_idx]
            if worst is None or mean < worst.mean:
                worst = RatioStats.from_moments(n, mean, m2)
        assert worst is not None
        rows.append(
            Figure3Row(sigma, config.rho, worst.mean, worst.se, worst.n, floor)
        )
    return rows
