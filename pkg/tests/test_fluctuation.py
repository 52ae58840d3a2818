import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from dfareg import (
    DetrendConfig,
    Profile,
    ScaleGrid,
    box_cross_fluctuation,
    build_profile,
    fit_box_trend,
    fluctuation_table,
)
from oracle import naive_box_f2, naive_fluctuations, naive_profile

# toy pair used for frozen box-level values (profiles hand-checked)
X8 = [2.0, 1.0, 4.0, 3.0, 6.0, 5.0, 8.0, 7.0]
Y8 = [1.0, 3.0, 2.0, 5.0, 4.0, 7.0, 6.0, 9.0]


def finite_series(min_size=12, max_size=40):
    return st.lists(
        st.floats(min_value=-50.0, max_value=50.0, allow_nan=False),
        min_size=min_size, max_size=max_size,
    )


# ---------------------------------------------------------------------------
# profiles
# ---------------------------------------------------------------------------

def test_profile_of_constant_series_is_zero():
    assert np.array_equal(build_profile([1.0, 1.0, 1.0, 1.0]).values, np.zeros(4))


def test_profile_hand_example():
    p = build_profile([1.0, 2.0, 3.0, 4.0])
    assert p.source_mean == 2.5
    assert np.allclose(p.values, [-1.5, -2.0, -1.5, 0.0], rtol=0, atol=1e-15)
    assert np.allclose(p.values, naive_profile([1.0, 2.0, 3.0, 4.0]), rtol=0, atol=1e-15)


def test_profile_rejects_nonfinite_with_index():
    with pytest.raises(ValueError, match="index 2"):
        build_profile([1.0, 2.0, float("nan"), 4.0])
    with pytest.raises(ValueError, match="index 0"):
        build_profile([float("inf"), 2.0, 3.0, 4.0])


def test_profile_rejects_short_series():
    with pytest.raises(ValueError, match="at least 4"):
        build_profile([1.0, 2.0, 3.0])


@settings(deadline=None)
@given(finite_series(min_size=4))
def test_profile_last_value_telescopes_to_zero(values):
    p = build_profile(values)
    scale = max(1.0, float(np.max(np.abs(values))))
    assert abs(p.values[-1]) <= len(values) * np.finfo(float).eps * scale


# ---------------------------------------------------------------------------
# box trend fits
# ---------------------------------------------------------------------------

def test_box_trend_reproduces_exact_line():
    fitted = fit_box_trend(np.array([2.0, 4.0, 6.0]), 0, 3, order=1)
    assert np.allclose(fitted, [2.0, 4.0, 6.0], rtol=0, atol=1e-12)


def test_box_trend_hand_value():
    fitted = fit_box_trend(np.array([1.0, 0.0, 1.0]), 0, 3, order=1)
    assert np.allclose(fitted, [2.0 / 3.0] * 3, rtol=1e-14)


def test_box_trend_order_zero_is_window_mean():
    rng = np.random.default_rng(5)
    values = rng.standard_normal(12)
    fitted = fit_box_trend(values, 3, 5, order=0)
    assert np.allclose(fitted, np.mean(values[3:8]), rtol=1e-13)


def test_box_trend_residuals_orthogonal_to_basis():
    rng = np.random.default_rng(6)
    values = rng.standard_normal(20)
    s = 8
    fitted = fit_box_trend(values, 4, s, order=2)
    resid = values[4:4 + s] - fitted
    t = np.arange(s, dtype=float)
    for basis in (np.ones(s), t, t**2):
        assert abs(resid @ basis) < 1e-9


def test_box_trend_window_checks():
    values = np.arange(10.0)
    with pytest.raises(ValueError, match="out of range"):
        fit_box_trend(values, 8, 4, order=1)
    with pytest.raises(ValueError, match="too small"):
        fit_box_trend(values, 0, 2, order=1)


def test_box_trend_accepts_profile_object():
    p = build_profile([1.0, 4.0, 2.0, 8.0, 5.0])
    direct = fit_box_trend(p.values, 0, 4, order=1)
    assert np.array_equal(fit_box_trend(p, 0, 4, order=1), direct)


# ---------------------------------------------------------------------------
# box-level fluctuations
# ---------------------------------------------------------------------------

def test_box_fluctuation_self_is_variance():
    p = build_profile(X8)
    value = box_cross_fluctuation(p, p, 0, 4)
    assert value >= 0.0
    assert value == box_cross_fluctuation(p.values, p.values, 0, 4)


def test_box_fluctuation_antisymmetric_profiles():
    p = build_profile(X8)
    neg = Profile(values=-p.values, source_mean=0.0)
    f_self = box_cross_fluctuation(p, p, 1, 5)
    assert box_cross_fluctuation(p, neg, 1, 5) == pytest.approx(-f_self, rel=1e-14)


def test_box_fluctuation_toy_frozen_values():
    # hand computation: x-residuals (0.7,-1.1,0.1,0.3), y-residuals (0.3,0.1,-1.1,0.7)
    px, py = build_profile(X8), build_profile(Y8)
    assert box_cross_fluctuation(px, py, 0, 4) == pytest.approx(1.0 / 15.0, rel=1e-12)
    assert box_cross_fluctuation(px, px, 0, 4) == pytest.approx(0.6, rel=1e-12)
    assert box_cross_fluctuation(px, py, 0, 4) == pytest.approx(
        naive_box_f2(naive_profile(X8), naive_profile(Y8), 0, 4), rel=1e-12)


def test_box_fluctuation_length_mismatch():
    with pytest.raises(ValueError, match="length"):
        box_cross_fluctuation(np.zeros(8), np.zeros(9), 0, 4)


# ---------------------------------------------------------------------------
# fluctuation tables
# ---------------------------------------------------------------------------

def test_table_of_series_with_itself():
    rng = np.random.default_rng(11)
    x = rng.standard_normal(48)
    table = fluctuation_table(x, x, [4, 8, 16])
    assert np.array_equal(table.fxy, table.fxx)
    assert np.array_equal(table.fyy, table.fxx)
    assert np.all(table.fxx >= 0)


@pytest.mark.parametrize("a", [-2.0, 0.5, 10.0])
def test_table_scale_equivariance(a):
    rng = np.random.default_rng(12)
    x = rng.standard_normal(40)
    y = rng.standard_normal(40)
    base = fluctuation_table(x, y, [4, 8])
    scaled = fluctuation_table(a * x, y, [4, 8])
    assert np.allclose(scaled.fxx, a * a * base.fxx, rtol=1e-12)
    assert np.allclose(scaled.fxy, a * base.fxy, rtol=1e-12)
    assert np.allclose(scaled.fyy, base.fyy, rtol=0)


def test_table_shift_invariance():
    rng = np.random.default_rng(13)
    x = rng.standard_normal(40)
    y = rng.standard_normal(40)
    base = fluctuation_table(x, y, [4, 8])
    shifted = fluctuation_table(x + 123.456, y, [4, 8])
    assert np.allclose(shifted.fxx, base.fxx, rtol=1e-9)
    assert np.allclose(shifted.fxy, base.fxy, rtol=0, atol=1e-9 * np.abs(base.fxy).max())


def test_table_symmetry_is_exact():
    rng = np.random.default_rng(14)
    x = rng.standard_normal(40)
    y = rng.standard_normal(40)
    assert np.array_equal(
        fluctuation_table(x, y, [4, 8, 13]).fxy,
        fluctuation_table(y, x, [4, 8, 13]).fxy,
    )


def test_table_sliding_at_largest_scale_uses_two_windows_divisor_one():
    x5 = [1.0, 3.0, 2.0, 5.0, 4.0]
    y5 = [2.0, 1.0, 4.0, 2.0, 6.0]
    table = fluctuation_table(x5, y5, [4])
    assert table.n_windows[0] == 2
    px, py = naive_profile(x5), naive_profile(y5)
    both = naive_box_f2(px, py, 0, 4) + naive_box_f2(px, py, 1, 4)
    # divisor is T - s = 1, so the two windows are summed, not averaged
    assert table.fxy[0] == pytest.approx(both, rel=1e-12)
    assert table.fxy[0] == pytest.approx(-0.23333333333333323, rel=1e-12)


@pytest.mark.parametrize("mode", ["sliding", "disjoint"])
@pytest.mark.parametrize("order", [0, 1, 2])
def test_table_matches_naive_oracle(mode, order):
    rng = np.random.default_rng(2718)
    x = rng.standard_normal(32)
    y = rng.standard_normal(32)
    cfg = DetrendConfig(poly_order=order, window_mode=mode)
    table = fluctuation_table(x, y, [4, 8], cfg)
    fxx, fyy, fxy = naive_fluctuations(x, y, [4, 8], order=order, mode=mode)
    assert np.allclose(table.fxx, fxx, rtol=1e-10)
    assert np.allclose(table.fyy, fyy, rtol=1e-10)
    assert np.allclose(table.fxy, fxy, rtol=1e-10, atol=1e-10 * np.sqrt(fxx * fyy).max())


def test_table_disjoint_window_count():
    x = np.random.default_rng(15).standard_normal(20)
    table = fluctuation_table(x, x, [6], DetrendConfig(window_mode="disjoint"))
    assert table.n_windows[0] == 3  # 20 // 6


def test_table_polynomial_profile_annihilated():
    # increments of a quadratic have a degree<=2 profile; order-2 detrending kills it
    t = np.arange(0, 65, dtype=float)
    poly = 0.3 * t**2 - 4.0 * t + 7.0
    x = np.diff(poly)
    table = fluctuation_table(x, x, [8, 16], DetrendConfig(poly_order=2))
    assert np.all(table.fxx <= table.fxx_floor)


def test_grid_validation():
    x = np.zeros(32)
    with pytest.raises(ValueError, match="exceeds series length"):
        fluctuation_table(x, x, [4, 32])
    with pytest.raises(ValueError, match="below poly_order"):
        fluctuation_table(x, x, [2, 8], DetrendConfig(poly_order=1))
    with pytest.raises(ValueError, match="strictly increasing"):
        ScaleGrid((4, 4, 8))
    with pytest.raises(ValueError, match="empty"):
        ScaleGrid(())


def test_table_length_mismatch():
    with pytest.raises(ValueError, match="differ in length"):
        fluctuation_table(np.zeros(8), np.zeros(9), [4])


def test_detrend_config_validation():
    with pytest.raises(ValueError, match="window_mode"):
        DetrendConfig(window_mode="overlapping")
    with pytest.raises(ValueError, match="poly_order"):
        DetrendConfig(poly_order=-1)


def test_scale_grid_constructors():
    assert ScaleGrid.linear(10, 50, 10).scales == (10, 20, 30, 40, 50)
    log_grid = ScaleGrid.logarithmic(4, 64, 5)
    assert log_grid.scales[0] == 4 and log_grid.scales[-1] == 64
    assert ScaleGrid.from_any([3, 5, 9]).scales == (3, 5, 9)


# ---------------------------------------------------------------------------
# properties
# ---------------------------------------------------------------------------

@settings(deadline=None, max_examples=60)
@given(finite_series(), finite_series())
def test_cauchy_schwarz_bound_holds(xs, ys):
    n = min(len(xs), len(ys))
    x, y = np.array(xs[:n]), np.array(ys[:n])
    table = fluctuation_table(x, y, [3, n // 2], DetrendConfig())
    bound = table.fxx * table.fyy
    assert np.all(table.fxy**2 <= bound * (1 + 1e-12) + 1e-30)


@settings(deadline=None, max_examples=60)
@given(finite_series(), st.floats(min_value=-1e4, max_value=1e4, allow_nan=False))
def test_shift_invariance_property(xs, c):
    x = np.array(xs)
    base = fluctuation_table(x, x, [3, len(x) // 2])
    shifted = fluctuation_table(x + c, x + c, [3, len(x) // 2])
    tol = 1e-9 * max(1.0, float(base.fxx.max()), abs(c) ** 2 * len(x) ** 2 * 1e-22)
    assert np.all(np.abs(shifted.fxx - base.fxx) <= 1e-9 * base.fxx + tol)
