"""Buy-date policy, certified ratio bounds, and the two forecast models.

The cost function is simple enough to check against hand-resolved
seasons, so those frozen outcomes anchor everything else: the worst-case
certificate is verified pointwise on exhaustive grids, the average-case
certificate against the exact two-point mixture, and the closed-form
optimal trust weight against the certificate it claims to minimize.
"""

import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from predalgs.sampling import SeededStream
from predalgs.ski_rental import (
    PredictionModelQ,
    SkiConfig,
    bernoulli_sweep,
    buy_time,
    corollary_bound,
    corollary_lambda_star,
    corollary_rows,
    cost,
    exact_average_ratio,
    gaussian_sweep,
    prior_bound,
    side_model,
    theorem3_bound,
    theorem4_bound,
    thm3_grid,
)

B = 10.0


def test_buy_factor_worked_values():
    assert SkiConfig(B, 0.5, rho=1.0).beta == 2.0
    assert SkiConfig(B, 0.5, rho=0.0).beta == 1.0
    assert SkiConfig(B, 0.25, rho=0.5).beta == 2.5


def test_zero_trust_weight_needs_zero_spread():
    assert SkiConfig(B, 0.0, rho=0.0).beta == 1.0
    with pytest.raises(ValueError):
        SkiConfig(B, 0.0, rho=0.5)


def test_config_validates_fields():
    with pytest.raises(ValueError):
        SkiConfig(0.0, 0.5)
    with pytest.raises(ValueError):
        SkiConfig(B, -0.1)
    with pytest.raises(ValueError):
        SkiConfig(B, 1.1)
    with pytest.raises(ValueError):
        SkiConfig(B, 0.5, rho=-0.2)
    with pytest.raises(ValueError):
        SkiConfig(B, 0.5, rho=1.2)


@given(lam=st.floats(0.01, 1.0), rho=st.floats(0.0, 1.0))
def test_buy_factor_stays_between_one_and_inverse_trust(lam, rho):
    config = SkiConfig(B, lam, rho=rho)
    assert 1.0 - 1e-12 <= config.beta <= 1.0 / lam + 1e-12


def test_buy_time_trusts_forecasts_at_or_above_cost():
    config = SkiConfig(B, 0.5, rho=1.0)
    assert buy_time(B, config) == 5.0
    assert buy_time(0.5 * B, config) == 20.0
    assert buy_time(0.5 * B, SkiConfig(B, 0.5, rho=0.0)) == 10.0


def test_buy_time_accepts_negative_forecasts():
    # Noisy forecasts can go negative; they just land on the distrusting
    # side, no clamping involved.
    assert buy_time(-3.0, SkiConfig(B, 0.5, rho=1.0)) == 20.0


def test_cost_long_season_trusted_forecast():
    out = cost(2.0 * B, 2.0 * B, SkiConfig(B, 0.5, rho=0.0))
    assert out.cost == 15.0
    assert out.opt == B
    assert out.ratio == 1.5
    assert out.buy_time == 5.0
    assert out.eta == 0.0


def test_cost_short_season_rents_throughout():
    out = cost(0.2 * B, 0.1 * B, SkiConfig(B, 0.5, rho=0.0))
    assert out.cost == 2.0
    assert out.ratio == 1.0
    assert out.opt == 2.0


def test_cost_long_season_distrusted_forecast():
    out = cost(3.0 * B, 0.5 * B, SkiConfig(B, 0.5, rho=1.0))
    assert out.cost == 30.0
    assert out.opt == B
    assert out.ratio == 3.0


def test_cost_buys_when_season_reaches_the_buy_date():
    # Arriving exactly at the buy date buys: this is the worst season for
    # a trusted forecast, paying the full 1 + 1/lam.
    out = cost(5.0, 2.0 * B, SkiConfig(B, 0.5, rho=0.0))
    assert out.cost == 15.0
    assert out.ratio == 3.0


def test_cost_tracks_forecast_error():
    out = cost(12.0, 7.0, SkiConfig(B, 0.5, rho=0.5))
    assert out.eta == 5.0


def test_cost_rejects_nonpositive_season():
    with pytest.raises(ValueError):
        cost(0.0, B, SkiConfig(B, 0.5))
    with pytest.raises(ValueError):
        cost(-1.0, B, SkiConfig(B, 0.5))


def test_bound_consistency_at_exact_forecast():
    assert theorem3_bound(2.0 * B, 2.0 * B, SkiConfig(B, 0.5, rho=0.0)) == 1.5
    assert theorem3_bound(2.0 * B, 2.0 * B, SkiConfig(B, 0.5, rho=1.0)) == 1.5


def test_bound_worked_value_at_half_relative_error():
    config = SkiConfig(B, 0.5, rho=1.0)
    assert theorem3_bound(2.0 * B, 2.5 * B, config) == 2.25
    assert theorem3_bound(2.0 * B, 1.5 * B, config) == 2.25


def test_bound_caps_at_robustness():
    config = SkiConfig(B, 0.5, rho=1.0)
    for y in (-5.0, 0.0, 100.0, 1000.0):
        assert theorem3_bound(2.0 * B, y, config) <= 3.0


def test_bound_zero_spread_wrong_forecast_keeps_only_robustness():
    config = SkiConfig(B, 0.5, rho=0.0)
    assert theorem3_bound(2.0 * B, 2.0 * B + 1e-9, config) == 3.0


def test_bound_zero_trust_weight_corner():
    config = SkiConfig(B, 0.0, rho=0.0)
    assert theorem3_bound(2.0 * B, 2.0 * B, config) == 1.0
    assert theorem3_bound(2.0 * B, B, config) == math.inf


@pytest.mark.parametrize("lam", [0.1, 0.5, 0.9])
@pytest.mark.parametrize("rho", [0.0, 0.5, 1.0])
def test_bound_holds_pointwise_on_grid(lam, rho):
    """The worst-case certificate is pointwise, not just in expectation."""
    config = SkiConfig(B, lam, rho=rho)
    grid = [B * i / 12.0 for i in range(1, 61)]
    worst = -math.inf
    for x in grid:
        for y in grid:
            excess = cost(x, y, config).ratio - theorem3_bound(x, y, config)
            worst = max(worst, excess)
    assert worst <= 1e-9


@given(
    x=st.floats(0.01, 60.0),
    y=st.floats(-10.0, 60.0),
    lam=st.floats(0.1, 1.0),
    rho=st.sampled_from([0.0, 0.3, 1.0]),
)
def test_bound_holds_pointwise_property(x, y, lam, rho):
    config = SkiConfig(B, lam, rho=rho)
    assert cost(x, y, config).ratio <= theorem3_bound(x, y, config) + 1e-9


def test_side_model_places_representatives():
    same_side = side_model(2.0 * B, B, 0.8)
    assert (same_side.y_same, same_side.y_opposite) == (2.0 * B, 0.5 * B)
    other = side_model(0.3 * B, B, 0.8)
    assert (other.y_same, other.y_opposite) == (0.5 * B, 2.0 * B)
    boundary = side_model(B, B, 0.8)
    assert boundary.y_same == 2.0 * B
    with pytest.raises(ValueError):
        side_model(0.0, B, 0.8)
    with pytest.raises(ValueError):
        PredictionModelQ(0.4, 2.0 * B, 0.5 * B)


def test_policy_reads_only_the_forecast_side():
    # Metamorphic: moving y within its side never changes the outcome.
    config = SkiConfig(B, 0.3, rho=0.75)
    for x in (0.5, 4.0, 10.0, 17.0, 42.0):
        low = [cost(x, y, config).ratio for y in (-2.0, 0.1, 5.0, B - 1e-9)]
        high = [cost(x, y, config).ratio for y in (B, B + 1e-9, 25.0, 300.0)]
        assert len(set(low)) == 1
        assert len(set(high)) == 1


def test_average_ratio_perfect_agreement_long_season():
    config = SkiConfig(B, 0.5, rho=0.0)
    model = side_model(2.0 * B, B, 1.0)
    assert exact_average_ratio(2.0 * B, config, model) == 1.5


def test_average_ratio_coin_flip_long_season():
    config = SkiConfig(B, 0.5, rho=0.0)
    model = side_model(2.0 * B, B, 0.5)
    assert exact_average_ratio(2.0 * B, config, model) == 1.75


def test_average_ratio_short_season_rents_on_both_sides():
    config = SkiConfig(B, 0.5, rho=0.0)
    model = side_model(0.4 * B, B, 0.5)
    assert exact_average_ratio(0.4 * B, config, model) == 1.0


def test_average_certificate_worked_values():
    assert theorem4_bound(SkiConfig(B, 0.5, rho=0.0), 0.5) == 2.0
    for lam in (0.3, 0.5, 0.9):
        got = theorem4_bound(SkiConfig(B, lam, rho=0.0), 1.0)
        assert got == pytest.approx(1.0 + lam, rel=1e-12)


def test_average_certificate_zero_trust_corner():
    config = SkiConfig(B, 0.0, rho=0.0)
    assert theorem4_bound(config, 1.0) == 1.0
    assert theorem4_bound(config, 0.7) == math.inf


def test_average_certificate_rejects_bad_agreement():
    with pytest.raises(ValueError):
        theorem4_bound(SkiConfig(B, 0.5), 0.4)
    with pytest.raises(ValueError):
        theorem4_bound(SkiConfig(B, 0.5), 1.1)


def test_average_certificate_grows_with_spread():
    rhos = [0.0, 0.25, 0.5, 0.75, 1.0]
    for lam in (0.1, 0.4, 0.7, 1.0):
        for qi in range(11):
            q = 0.5 + 0.05 * qi
            bounds = [theorem4_bound(SkiConfig(B, lam, rho=rho), q) for rho in rhos]
            assert all(b2 >= b1 for b1, b2 in zip(bounds, bounds[1:]))


def test_average_certificate_dominates_exact_average():
    x_grid = thm3_grid(B, 500)[::5]
    for lam in (0.1, 0.4, 0.7, 1.0):
        for rho in (0.0, 0.5, 1.0):
            config = SkiConfig(B, lam, rho=rho)
            for qi in range(6):
                q = 0.5 + 0.1 * qi
                bound = theorem4_bound(config, q)
                for x in x_grid:
                    got = exact_average_ratio(x, config, side_model(x, B, q))
                    assert got <= bound + 1e-9


def test_optimal_trust_weight_worked_values():
    assert corollary_lambda_star(1.0) == 0.0
    assert corollary_lambda_star(0.5) == (math.sqrt(5.0) - 1.0) / 2.0


def test_optimal_trust_weight_stays_in_range():
    for qi in range(101):
        q = 0.5 + 0.005 * qi
        assert 0.0 <= corollary_lambda_star(q) <= 1.0 + 1e-12


def test_corollary_bound_worked_values():
    assert corollary_bound(1.0) == 1.0
    assert corollary_bound(0.5) == 1.25 + 0.5 * math.sqrt(1.25)


def test_corollary_bound_improves_on_prior():
    for qi in range(101):
        q = 0.5 + 0.005 * qi
        assert corollary_bound(q) <= prior_bound(q) + 1e-12
    assert corollary_bound(0.7) < prior_bound(0.7) - 0.25


def test_corollary_is_the_minimized_average_certificate():
    # The closed-form lambda* should reproduce the certificate it claims
    # to minimize, and no grid lambda should beat it.
    for qi in range(11):
        q = 0.5 + 0.05 * qi
        lam_star = corollary_lambda_star(q)
        at_star = theorem4_bound(SkiConfig(B, lam_star, rho=0.0), q)
        assert at_star == pytest.approx(corollary_bound(q), rel=1e-9)
        for li in range(1, 21):
            lam = li / 20.0
            assert theorem4_bound(SkiConfig(B, lam, rho=0.0), q) >= at_star - 1e-9


def test_corollary_functions_reject_bad_agreement():
    for fn in (corollary_lambda_star, corollary_bound, prior_bound):
        with pytest.raises(ValueError):
            fn(0.3)
        with pytest.raises(ValueError):
            fn(1.5)


def test_corollary_rows_carry_all_columns():
    rows = corollary_rows([0.5, 0.75, 1.0])
    assert [row.q for row in rows] == [0.5, 0.75, 1.0]
    assert rows[0].lambda_star == corollary_lambda_star(0.5)
    assert rows[0].corollary_bound == corollary_bound(0.5)
    assert rows[0].prior_bound == prior_bound(0.5)
    assert rows[2].corollary_bound == 1.0


def test_season_grid_spans_five_buy_costs():
    grid = thm3_grid(B, 500)
    assert len(grid) == 500
    assert grid[0] == 0.1
    assert grid[99] == B
    assert grid[-1] == 5.0 * B
    with pytest.raises(ValueError):
        thm3_grid(B, 0)


def test_gaussian_sweep_noiseless_sits_at_consistency():
    x_grid = [2.0, 5.0, 9.0, 10.0, 20.0, 50.0]
    for rho in (0.0, 1.0):
        config = SkiConfig(B, 0.5, rho=rho)
        rows = gaussian_sweep(config, [0.0], x_grid, trials=2, stream=SeededStream(9))
        row = rows[0]
        assert row.worst_mean == 1.5
        assert row.se == 0.0
        assert row.robustness == 3.0
        assert row.rho == rho


def test_gaussian_sweep_small_noise_breaks_consistency():
    # The noiseless worst of 1.5 is unstable: even a sliver of noise at
    # the boundary season pushes the worst mean past 1.6.
    config = SkiConfig(B, 0.5, rho=0.0)
    x_grid = [9.0, 9.5, 9.9, 10.0, 10.1, 10.5, 11.0, 20.0]
    rows = gaussian_sweep(config, [0.1], x_grid, trials=4000, stream=SeededStream(41))
    assert rows[0].worst_mean >= 1.6
    assert rows[0].worst_mean <= 3.0


def test_gaussian_sweep_matches_across_worker_counts():
    config = SkiConfig(B, 0.5, rho=0.5)
    serial = gaussian_sweep(
        config, [0.0, 1.0], [5.0, 10.0, 20.0], trials=50, stream=SeededStream(2), jobs=1
    )
    pooled = gaussian_sweep(
        config, [0.0, 1.0], [5.0, 10.0, 20.0], trials=50, stream=SeededStream(2), jobs=2
    )
    assert serial == pooled


def test_gaussian_sweep_validates_inputs():
    config = SkiConfig(B, 0.5)
    with pytest.raises(ValueError):
        gaussian_sweep(config, [0.0], [10.0], trials=0, stream=SeededStream(1))
    with pytest.raises(ValueError):
        gaussian_sweep(config, [], [10.0], trials=5, stream=SeededStream(1))
    with pytest.raises(ValueError):
        gaussian_sweep(config, [0.0], [], trials=5, stream=SeededStream(1))
    with pytest.raises(ValueError):
        gaussian_sweep(config, [-0.5], [10.0], trials=5, stream=SeededStream(1))


def test_bernoulli_sweep_perfect_agreement_ignores_spread():
    configs = [SkiConfig(B, 0.5, rho=0.0), SkiConfig(B, 0.5, rho=1.0)]
    rows = bernoulli_sweep(configs, [1.0], trials=600, stream=SeededStream(17))
    assert rows[0].mean == rows[1].mean
    assert rows[0].rho == 0.0 and rows[1].rho == 1.0


def test_bernoulli_sweep_smaller_spread_wins_on_average():
    configs = [SkiConfig(B, 0.5, rho=0.0), SkiConfig(B, 0.5, rho=1.0)]
    rows = bernoulli_sweep(configs, [0.7], trials=4000, stream=SeededStream(29))
    lo, hi = rows[0], rows[1]
    combined = math.hypot(lo.se, hi.se)
    assert lo.mean <= hi.mean + 3.0 * combined


def test_bernoulli_sweep_stays_under_average_certificate():
    configs = [SkiConfig(B, 0.5, rho=0.0), SkiConfig(B, 0.5, rho=1.0)]
    q_grid = [0.5, 0.7, 1.0]
    rows = bernoulli_sweep(configs, q_grid, trials=2000, stream=SeededStream(13))
    for i, config in enumerate(configs):
        for j, q in enumerate(q_grid):
            row = rows[i * len(q_grid) + j]
            assert row.q == q
            assert row.mean <= theorem4_bound(config, q) + 3.0 * row.se


def test_bernoulli_sweep_validates_inputs():
    config = SkiConfig(B, 0.5)
    with pytest.raises(ValueError):
        bernoulli_sweep([config], [0.7], trials=0, stream=SeededStream(1))
    with pytest.raises(ValueError):
        bernoulli_sweep([], [0.7], trials=5, stream=SeededStream(1))
    with pytest.raises(ValueError):
        bernoulli_sweep([config], [0.4], trials=5, stream=SeededStream(1))
    mixed = [config, SkiConfig(B + 1.0, 0.5)]
    with pytest.raises(ValueError):
        bernoulli_sweep(mixed, [0.7], trials=5, stream=SeededStream(1))


@given(
    x=st.floats(0.01, 80.0),
    y=st.floats(-20.0, 80.0),
    lam=st.floats(0.05, 1.0),
    rho=st.floats(0.0, 1.0),
)
def test_cost_ratio_never_beats_the_offline_optimum(x, y, lam, rho):
    out = cost(x, y, SkiConfig(B, lam, rho=rho))
    assert out.ratio >= 1.0
    assert out.opt == min(x, B)
    assert out.cost >= out.opt
