"""Doubling search on the line, steered by an untrusted location hint.

A target sits at signed position x with |x| >= 1; a searcher starts at the
origin and walks back and forth, paying every unit of distance, until it
steps on the target.  Turn points grow geometrically, d_i = b^i / gamma,
and the hint y fixes both the ladder offset gamma and the starting
direction: if the target really is at y, the leg that finally reaches it
arrives exactly at its turn point and no distance is wasted overshooting.

A hint just short of the target costs two extra ladder periods, which is
the full hint-free penalty.  The randomized variant therefore inflates the
hint by (1 + rho * xi) with xi a heavy-tailed multiplier of mean 1 (see
``sampling.sample_pareto_tail``), trading a constant factor of expected
cost for smooth degradation in the hint error.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .sampling import RatioStats, SeededStream, sample_pareto_tail

LEG_CAP = 1_000_000


@dataclass(frozen=True)
class LineSearchConfig:
    """Search parameters within the certified analysis range.

    The expectation bound of ``theorem1_bound`` is proved for base >= 2 and
    rho in [0, 1].  Exploratory runs outside that range (the experiment
    sweeps use rho = 5) bypass this record and carry raw floats instead.
    """

    base: float
    rho: float = 0.0

    def __post_init__(self) -> None:
        if not self.base >= 2.0:
            raise ValueError(f"base must be at least 2, got {self.base!r}")
        if not 0.0 <= self.rho <= 1.0:
            raise ValueError(f"rho must lie in [0, 1], got {self.rho!r}")


@dataclass(frozen=True)
class PredictionDecomposition:
    """Ladder placement induced by a hint.

    ``scale_exponent`` is the smallest integer k with b^k >= |y|, so the
    offset gamma = b^k / |y| always lands in [1, b).  ``first_direction``
    is +1 when the first leg walks toward positive positions; it is chosen
    so that the leg reaching the hinted position walks toward it.
    """

    scale_exponent: int
    offset: float
    first_direction: int


@dataclass(frozen=True)
class SearchTrace:
    """Realized walk: total distance, final leg index, and turn points.

    ``turn_points`` holds d_0 .. d_m where m is the final leg; the walk
    pays twice every entry before the last and then |x| on the final leg.
    """

    distance: float
    final_iteration: int
    turn_points: tuple[float, ...]


@dataclass(frozen=True)
class PerturbedPrediction:
    raw: float
    tail_sample: float
    inflated: float


def _check_base(b: float) -> None:
    if not b >= 2.0:
        raise ValueError(f"doubling base must be at least 2, got {b!r}")


def _check_hint(y: float) -> None:
    if not math.isfinite(y) or y == 0.0:
        raise ValueError(f"hint must be finite and nonzero, got {y!r}")


def _check_target(x: float) -> None:
    if not math.isfinite(x) or abs(x) < 1.0:
        raise ValueError(f"target must be finite with |x| >= 1, got {x!r}")


def _ladder_exponent(magnitude: float, b: float) -> int:
    # Smallest integer k with b^k >= magnitude.  The float log estimate can
    # be off by one in either direction, so fix it up with exact pow checks.
    k = int(math.ceil(math.log(magnitude) / math.log(b)))
    while math.pow(b, k) < magnitude:
        k += 1
    while math.pow(b, k - 1) >= magnitude:
        k -= 1
    return k


def decompose_prediction(y: float, b: float) -> PredictionDecomposition:
    """Split a hint into ladder exponent, offset, and starting direction."""
    _check_hint(y)
    _check_base(b)
    sign = -1 if y < 0.0 else 1
    magnitude = -y if y < 0.0 else y
    k = _ladder_exponent(magnitude, b)
    gamma = math.pow(b, k) / magnitude
    first = sign if (k & 1) == 0 else -sign
    return PredictionDecomposition(k, gamma, first)


def _walk_distance(x: float, y: float, b: float) -> float:
    # Trace-free twin of simulate_search for positive target and hint,
    # used by the sampling kernels; the per-leg arithmetic must stay
    # identical to the traced walk.
    k = _ladder_exponent(y, b)
    gamma = math.pow(b, k) / y
    first = 1 if (k & 1) == 0 else -1
    total = 0.0
    leg = 0
    while leg <= LEG_CAP:
        reach = math.pow(b, leg) / gamma
        direction = first if (leg & 1) == 0 else -first
        if direction > 0 and reach >= x:
            return total + x
        total += 2.0 * reach
        leg += 1
    raise RuntimeError(
        "line search failed to terminate within the leg cap; "
        "inputs are outside the supported float range"
    )


def _distance_unchecked(x: float, y: float, b: float) -> float:
    # Closed form for positive target and hint, no validation; the public
    # wrapper normalizes signs and rejects mismatched ones first.
    k = _ladder_exponent(y, b)
    gamma = math.pow(b, k) / y
    rel = y / x
    j = int(math.ceil(math.log(x / y) / (2.0 * math.log(b))))
    while rel * math.pow(b, 2.0 * (j - 1)) >= 1.0:
        j -= 1
    while rel * math.pow(b, 2.0 * j) < 1.0:
        j += 1
    m = k + 2 * j
    return x + (2.0 / (b - 1.0)) * (math.pow(b, m) / gamma - 1.0 / gamma)


def simulate_search(x: float, y: float, b: float) -> SearchTrace:
    """Walk the ladder until the target is crossed; return the trace.

    The search is symmetric under flipping both signs, so negative targets
    are normalized away up front.  The leg cap only guards against float
    pathologies such as NaN sneaking past validation; for finite valid
    inputs the walk terminates long before it.
    """
    _check_target(x)
    _check_hint(y)
    _check_base(b)
    if x < 0.0:
        x = -x
        y = -y
    sign = -1 if y < 0.0 else 1
    magnitude = -y if y < 0.0 else y
    k = _ladder_exponent(magnitude, b)
    gamma = math.pow(b, k) / magnitude
    first = sign if (k & 1) == 0 else -sign

    turn_points = []
    total = 0.0
    leg = 0
    while leg <= LEG_CAP:
        reach = math.pow(b, leg) / gamma
        turn_points.append(reach)
        direction = first if (leg & 1) == 0 else -first
        if direction > 0 and reach >= x:
            return SearchTrace(total + x, leg, tuple(turn_points))
        total += 2.0 * reach
        leg += 1
    raise RuntimeError(
        "line search failed to terminate within the leg cap; "
        "inputs are outside the supported float range"
    )


def crossing_exponent(x: float, y: float, b: float) -> int:
    """Number of ladder periods separating target from hint.

    Returns the smallest integer j with (|y| / |x|) * b^(2 j) >= 1; the leg
    that finds the target is then scale_exponent + 2 j.  Hints at or beyond
    the target give j <= 0, short hints give j >= 1.
    """
    _check_target(x)
    _check_hint(y)
    _check_base(b)
    if (x > 0.0) != (y > 0.0):
        raise ValueError("crossing index requires hint and target on the same side")
    ax = -x if x < 0.0 else x
    ay = -y if y < 0.0 else y
    rel = ay / ax
    j = int(math.ceil(math.log(ax / ay) / (2.0 * math.log(b))))
    while rel * math.pow(b, 2.0 * (j - 1)) >= 1.0:
        j -= 1
    while rel * math.pow(b, 2.0 * j) < 1.0:
        j += 1
    return j


def closed_form_distance(x: float, y: float, b: float) -> float:
    """Exact distance paid when the hint shares the target's side.

    Equals ``simulate_search`` up to float rounding: the walk stops on leg
    m = k + 2 j having paid x plus twice every earlier turn distance, and
    the geometric sum collapses to x + (2/(b-1)) (b^m - 1) / gamma.
    """
    _check_target(x)
    _check_hint(y)
    _check_base(b)
    if x < 0.0:
        x = -x
        y = -y
    if y < 0.0:
        raise ValueError("closed form requires hint and target on the same side")
    return _distance_unchecked(x, y, b)


def perturb_prediction(y: float, rho: float, u: float) -> PerturbedPrediction:
    """Inflate a positive hint by the randomized heavy-tail multiplier.

    The certified analysis covers rho in [0, 1]; larger scales are accepted
    so that exploratory sweeps can use them, they just carry no bound.
    """
    if not y > 0.0:
        raise ValueError(f"perturbation is defined for positive hints, got {y!r}")
    if rho < 0.0:
        raise ValueError(f"perturbation scale must be nonnegative, got {rho!r}")
    xi = sample_pareto_tail(u)
    return PerturbedPrediction(y, xi, (1.0 + rho * xi) * y)


def consistency_bound(b: float) -> float:
    """Worst ratio when the hint is exactly right: (b + 1) / (b - 1)."""
    _check_base(b)
    return (b + 1.0) / (b - 1.0)


def robustness_bound(b: float) -> float:
    """Worst ratio over every hint and target: 1 + 2 b^2 / (b - 1).

    The bound is approached, never attained: a hint just short of the
    target forces the walk through two extra ladder periods, and the
    supremum over such near misses is this value.
    """
    _check_base(b)
    return 1.0 + 2.0 * b * b / (b - 1.0)


def theorem1_bound(
    x: float, y: float, b: float, rho: float, eta: float | None = None
) -> float:
    """Certified expected-ratio bound for the randomized search.

    ``eta`` is the hint error |x - y|; it is recomputed when omitted and
    accepted explicitly so sweeps can reuse a precomputed value.  For hints
    at or past the target the bound degrades linearly in eta / x with slope
    2 (1 + rho) / (b - 1).  For short hints the randomized overshoot gives
    slope 4 (b + 1) / rho, so rho = 0 with a short hint falls back to the
    plain robustness guarantee.
    """
    if not x >= 1.0:
        raise ValueError(f"target must satisfy x >= 1, got {x!r}")
    _check_base(b)
    if not 0.0 <= rho <= 1.0:
        raise ValueError(f"bound is certified for rho in [0, 1], got {rho!r}")
    if eta is None:
        eta = abs(x - y)
    base = (b + 1.0 + 2.0 * rho) / (b - 1.0)
    if y >= x:
        return base + (2.0 * (1.0 + rho) / (b - 1.0)) * (eta / x)
    if rho == 0.0:
        return robustness_bound(b)
    return base + (4.0 * (b + 1.0) / rho) * (eta / x)


def mc_ratio_cell(
    x: float,
    y: float,
    b: float,
    rho: float,
    trials: int,
    seed: int,
    stream_id: int = 0,
) -> tuple[RatioStats, float]:
    """Monte-Carlo cell for one (hint, scale) pair, any rho >= 0.

    Returns the ratio statistics together with the largest single ratio
    seen; the verification suites compare the latter against the
    robustness bound, which holds for every realization.
    """
    if trials < 1:
        raise ValueError(f"trials must be at least 1, got {trials!r}")
    _check_target(x)
    if not y > 0.0:
        raise ValueError(f"sampled hints must be positive, got {y!r}")
    _check_base(b)
    if rho < 0.0:
        raise ValueError(f"perturbation scale must be nonnegative, got {rho!r}")
    from . import kernels

    n, mean, m2, peak = kernels.ls_mc_cell(x, y, b, rho, seed, stream_id, trials)
    return RatioStats.from_moments(n, mean, m2), peak


def expected_ratio_mc(
    x: float,
    y: float,
    config: LineSearchConfig,
    trials: int,
    stream: SeededStream,
) -> RatioStats:
    """Sampled expected ratio of the randomized search at one grid point.

    The cell owns the whole stream: draws are taken at positions 0 ..
    trials - 1 of (stream.seed, stream.stream_id) regardless of how far
    the caller has advanced the stream object.
    """
    stats, _peak = mc_ratio_cell(
        x, y, config.base, config.rho, trials, stream.seed, stream.stream_id
    )
    return stats


def brittleness_probe(
    b: float,
    epsilon: float,
    x: float,
    grid_points: int = 1000,
    rho: float = 0.0,
    trials: int = 0,
    seed: int = 0,
) -> float:
    """Worst ratio over hints within relative distance epsilon below the target.

    With rho = 0 this sweeps the deterministic closed form over a grid of
    hints in [max(x / b^2, (1 - epsilon) x), x) and exposes the cliff: an
    arbitrarily small undershoot costs two extra ladder periods.  With
    rho > 0 each grid hint is scored by Monte-Carlo mean instead, which is
    how the randomized variant flattens the cliff.
    """
    if not epsilon > 0.0:
        raise ValueError(f"epsilon must be positive, got {epsilon!r}")
    if not x >= 1.0:
        raise ValueError(f"target must satisfy x >= 1, got {x!r}")
    _check_base(b)
    if grid_points < 1:
        raise ValueError(f"grid_points must be positive, got {grid_points!r}")
    lo = x / (b * b)
    lower = (1.0 - epsilon) * x
    if lower > lo:
        lo = lower
    span = x - lo
    worst = 0.0
    for i in range(grid_points):
        y = lo + span * i / grid_points
        if rho == 0.0:
            score = closed_form_distance(x, y, b) / x
        else:
            if trials < 1:
                raise ValueError("rho > 0 probes need a positive trial count")
            stats, _peak = mc_ratio_cell(x, y, b, rho, trials, seed, stream_id=i)
            score = stats.mean
        if score > worst:
            worst = score
    return worst


@dataclass(frozen=True)
class Figure2Row:
    y_over_x: float
    rho: float
    mean: float
    se: float | None
    n: int
    bound: float | None


def _figure2_cell(args: tuple) -> tuple[int, float, float, float]:
    x, y, b, rho, seed, stream_id, trials = args
    from . import kernels

    return kernels.ls_mc_cell(x, y, b, rho, seed, stream_id, trials)


def hint_grid(x: float, b: float, points: int) -> list[float]:
    """Log-spaced hints spanning [x / b^2, b^2 x], endpoints included."""
    if points < 2:
        raise ValueError(f"need at least 2 grid points, got {points!r}")
    lo = math.log(x / (b * b))
    hi = math.log(b * b * x)
    step = (hi - lo) / (points - 1)
    return [math.exp(lo + i * step) for i in range(points)]


def figure2_sweep(
    x: float,
    b: float,
    rho_values: list[float],
    points: int,
    trials: int,
    seed: int,
    jobs: int = 1,
) -> list[Figure2Row]:
    """Expected ratio against hint position, one series per smoothing scale.

    Rows are ordered by rho series first, then by hint position.  Stream
    ids are the cell indices in that order, so parallel execution cannot
    change the output.  Scales beyond the certified range run fine but get
    no bound value.
    """
    from ._parallel import map_cells

    ys = hint_grid(x, b, points)
    cells = []
    for i, rho in enumerate(rho_values):
        for jj, y in enumerate(ys):
            cells.append((x, y, b, rho, seed, i * len(ys) + jj, trials))
    results = map_cells(_figure2_cell, cells, jobs)
    rows = []
    for (cx, y, cb, rho, _seed, _sid, _trials), (n, mean, m2, _peak) in zip(
        cells, results
    ):
        stats = RatioStats.from_moments(n, mean, m2)
        bound = theorem1_bound(cx, y, cb, rho) if rho <= 1.0 else None
        rows.append(Figure2Row(y / cx, rho, stats.mean, stats.se, stats.n, bound))
    return rows
