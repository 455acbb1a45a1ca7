"""Reference implementations of the sampling kernels, pure Python.

Every kernel here has a compiled twin; the selector in ``kernels`` picks
whichever is available.  The two are written expression for expression so
their outputs agree to the last bit, which is what the cross-check tests
assert.  Keep any change mirrored in the compiled source.

All kernels take scalars, never objects, so cells pickle cheaply to
worker processes, and they return plain tuples (n, mean, m2[, peak]) in
the accumulator convention of ``sampling.RatioStats``.
"""

from __future__ import annotations

import math

from .line_search import _distance_unchecked, _walk_distance
from .one_max import _first_ramp_payoff
from .sampling import stream_base, unit_draw

_TWO_PI = 6.283185307179586


def ls_mc_cell(
    x: float,
    y: float,
    b: float,
    rho: float,
    seed: int,
    stream_id: int,
    trials: int,
) -> tuple[int, float, float, float]:
    """Sampled ratio of the line walk with an inflated hint; tracks the peak."""
    base = stream_base(seed, stream_id)
    n = 0
    mean = 0.0
    m2 = 0.0
    peak = 0.0
    for t in range(trials):
        u = unit_draw(base, t)
        xi = 1.0 / math.sqrt(u) - 1.0
        yt = (1.0 + rho * xi) * y
        ratio = _distance_unchecked(x, yt, b) / x
        n += 1
        delta = ratio - mean
        mean += delta / n
        m2 += delta * (ratio - mean)
        if ratio > peak:
            peak = ratio
    return n, mean, m2, peak


def ls_oracle_scan(
    b: float,
    x_start: float,
    x_step: float,
    x_count: int,
    y_points: int,
) -> tuple[float, float, int]:
    """Walked distance against the closed form over a target/hint grid.

    Hints are log-spaced across [1.01 x / b^2, 0.995 b^2 x]; the guards
    keep the grid off the exact period boundaries, where the walk's
    turn-point comparison and the closed form's period index can round a
    hair apart and the two models legitimately differ.  Returns the
    largest relative disagreement, the largest ratio seen, and the case
    count.
    """
    worst = 0.0
    peak = 0.0
    cases = 0
    for i in range(x_count):
        x = x_start + i * x_step
        lo = math.log(1.01 * x / (b * b))
        hi = math.log(0.995 * b * b * x)
        step = (hi - lo) / (y_points - 1)
        for jj in range(y_points):
            y = math.exp(lo + jj * step)
            walked = _walk_distance(x, y, b)
            closed = _distance_unchecked(x, y, b)
            rel = abs(walked - closed) / closed
            if rel > worst:
                worst = rel
            ratio = walked / x
            if ratio > peak:
                peak = ratio
            cases += 1
    return worst, peak, cases


def om_gu_cell(
    c: float,
    r: float,
    rho: float,
    s: float,
    seed: int,
    stream_id: int,
    trials: int,
) -> tuple[int, float, float]:
    """Sampled worst-instance guarantee of the smoothed threshold rule.

    Scores c e^{-rho u} when the threshold draw crosses the maximum
    (u >= s/rho) and the crash fraction bound r e^{rho u} otherwise.
    """
    base = stream_base(seed, stream_id)
    cut = s / rho
    n = 0
    mean = 0.0
    m2 = 0.0
    for t in range(trials):
        u = unit_draw(base, t)
        if u >= cut:
            val = c * math.exp(-rho * u)
        else:
            val = r * math.exp(rho * u)
        n += 1
        delta = val - mean
        mean += delta / n
        m2 += delta * (val - mean)
    return n, mean, m2


def om_fig3_cell(
    lam: float,
    theta: float,
    c: float,
    r: float,
    rho: float,
    sigma: float,
    p_star: float,
    n_prices: int,
    seed: int,
    stream_id: int,
    trials: int,
) -> tuple[int, float, float]:
    """Sampled payoff fraction on the ramp-then-crash instance, noisy forecast."""
    base = stream_base(seed, stream_id)
    inv_c = 1.0 / c
    inv_r = 1.0 / r
    n = 0
    mean = 0.0
    m2 = 0.0
    for t in range(trials):
        u1 = unit_draw(base, 2 * t)
        u2 = unit_draw(base, 2 * t + 1)
        y = p_star + (2.0 * u1 - 1.0) * sigma
        if y < 1.0:
            y = 1.0
        elif y > theta:
            y = theta
        if y >= inv_r:
            phi = math.exp(-rho * u2) / r
        elif y < inv_c:
            phi = inv_c
        else:
            phi = lam / r + (1.0 - lam) * c * y
        ratio = _first_ramp_payoff(phi, p_star, n_prices) / p_star
        n += 1
        delta = ratio - mean
        mean += delta / n
        m2 += delta * (ratio - mean)
    return n, mean, m2


def ski_fig5_cell(
    b: float,
    lam: float,
    beta: float,
    sigma: float,
    x: float,
    seed: int,
    stream_id: int,
    trials: int,
) -> tuple[int, float, float]:
    """Sampled cost ratio of the rent-or-buy policy under Gaussian noise."""
    base = stream_base(seed, stream_id)
    n = 0
    mean = 0.0
    m2 = 0.0
    for t in range(trials):
        u1 = unit_draw(base, 2 * t)
        u2 = unit_draw(base, 2 * t + 1)
        z = math.sqrt(-2.0 * math.log(u1)) * math.cos(_TWO_PI * u2)
        y = x + sigma * z
        buy_at = lam * b if y >= b else beta * b
        paid = x if x < buy_at else buy_at + b
        opt = x if x < b else b
        ratio = paid / opt
        n += 1
        delta = ratio - mean
        mean += delta / n
        m2 += delta * (ratio - mean)
    return n, mean, m2


def ski_fig6_cell(
    b: float,
    lam: float,
    beta: float,
    q: float,
    seed: int,
    stream_id: int,
    trials: int,
) -> tuple[int, float, float]:
    """Sampled cost ratio with random seasons and side-agreement forecasts."""
    base = stream_base(seed, stream_id)
    n = 0
    mean = 0.0
    m2 = 0.0
    for t in range(trials):
        u1 = unit_draw(base, 2 * t)
        u2 = unit_draw(base, 2 * t + 1)
        x = 1.0 + (4.0 * b - 1.0) * u1
        season_ge = x >= b
        trusting = season_ge if u2 <= q else not season_ge
        buy_at = lam * b if trusting else beta * b
        paid = x if x < buy_at else buy_at + b
        opt = x if x < b else b
        ratio = paid / opt
        n += 1
        delta = ratio - mean
        mean += delta / n
        m2 += delta * (ratio - mean)
    return n, mean, m2


def ski_thm3_scan(
    b: float,
    lam: float,
    rho: float,
    beta: float,
    steps: int,
) -> float:
    """Largest excess of the realized cost ratio over its certificate.

    Sweeps season and forecast over {b/100, ..., steps·b/100} and returns
    max(ratio - bound); a certificate that holds everywhere keeps this at
    or below zero up to rounding.
    """
    robust = 1.0 + 1.0 / lam
    worst = -math.inf
    for i in range(1, steps + 1):
        x = b * (i / 100.0)
        opt = x if x < b else b
        for jj in range(1, steps + 1):
            y = b * (jj / 100.0)
            buy_at = lam * b if y >= b else beta * b
            paid = x if x < buy_at else buy_at + b
            ratio = paid / opt
            eta = abs(x - y)
            if rho == 0.0:
                if eta == 0.0:
                    consistent = 1.0 + lam
                    bound = robust if robust < consistent else consistent
                else:
                    bound = robust
            else:
                smooth = (1.0 + lam) + (1.0 + lam / rho) * (eta / opt)
                bound = robust if robust < smooth else smooth
            excess = ratio - bound
            if excess > worst:
                worst = excess
    return worst
