import numpy as np
import pytest
from scipy.integrate import quad

from chainwork import (
    ChainParams,
    PoleError,
    dispersion,
    endpoint_derivatives,
    infinite_green,
    limit_energy_outside,
    limit_green_outside,
    limit_work_band_edges,
    limit_work_outside,
    mean_scaled_work,
    outside_band_derivatives,
    scaled_work_values,
    scaling_point,
    total_mech_energy_closed,
    window_average_work,
    work,
    work_bound,
    young_histogram,
)

P11 = ChainParams(50, 1.0, 1.0, 1.0)


# --- outside band -----------------------------------------------------------

def test_limit_green_value_from_quadrature_oracle():
    def integrand(r, omega, w0):
        return 2 * np.cos(np.pi * r / 2) ** 2 / (w0**2 - omega**2 + 4 * np.sin(np.pi * r / 2) ** 2)

    for omega, w0 in ((3.0, 1.0), (0.5, 1.0), (2.5, 0.0), (9.0, 2.0)):
        expected, err = quad(integrand, 0.0, 1.0, args=(omega, w0))
        assert err < 1e-9
        gbar0, gbar1 = limit_green_outside(omega, w0)
        assert gbar0 == pytest.approx(expected, abs=1e-10)
        assert gbar1 == 0.0


def test_limit_green_decays_at_high_frequency():
    gbar0, _ = limit_green_outside(100.0, 1.0)
    assert abs(gbar0) < 1e-3


def test_limit_green_rejects_band_interior():
    with pytest.raises(ValueError):
        limit_green_outside(1.5, 1.0)


def test_finite_n_converges_to_limit_green():
    closed, _ = limit_green_outside(3.0, 1.0)
    errs = []
    for n in (500, 1000):
        from chainwork import endpoint_greens

        ends = endpoint_greens(3.0, ChainParams(n, 1.0, 0.0, 0.0))
        errs.append(abs(float(ends.g0[0]) - closed))
    # convergence is at least O(1/n); at this frequency it is in fact
    # exponential and saturates at roundoff, hence the additive floor
    assert errs[1] <= errs[0] / 2 + 1e-12
    assert errs[1] < 1e-4


def test_limit_work_band_edge_values():
    # lower edge: all work into the driven-end reservoir at rate F^2/(4 g+)
    F = 1.3
    lower, upper = limit_work_band_edges(F, P11)
    assert lower == pytest.approx(F * F / 4.0, rel=1e-12)
    # upper edge for gamma = (1, 1), omega0 = 1: evaluates to 5 F^2 / 24
    assert upper == pytest.approx(5.0 * F * F / 24.0, rel=1e-10)
    # independent arithmetic for an asymmetric pair
    p = ChainParams(10, 1.0, 0.5, 2.0)
    _, up = limit_work_band_edges(1.0, p)
    s = 5.0
    expected = 2.0 * s / 4 * (1 + 0.25 * s) / (1 + (0.25 + 4.0) * s + 0.25 * 4.0 * s * s)
    assert up == pytest.approx(expected, rel=1e-12)


def test_limit_work_edge_is_approached():
    vals = [limit_work_outside(1.0 - d, 1.0, P11) for d in (1e-2, 1e-4, 1e-6)]
    lower, _ = limit_work_band_edges(1.0, P11)
    errors = np.abs(np.array(vals) - lower)
    assert np.all(np.diff(errors) < 0)
    assert errors[-1] < 1e-4


def test_limit_work_vanishes_at_extremes():
    assert limit_work_outside(1e-4, 1.0, P11) < 1e-6
    assert limit_work_outside(1e4, 1.0, P11) < 1e-6
    p_no_right = ChainParams(50, 1.0, 1.0, 0.0)
    assert limit_work_outside(3.0, 1.0, p_no_right) == 0.0


def test_finite_n_work_converges_to_limit():
    closed = limit_work_outside(3.0, 1.0, P11)
    errs = []
    for n in (500, 1000, 2000):
        p = ChainParams(n, 1.0, 1.0, 1.0)
        errs.append(abs(work(3.0, 1.0, p).W - closed))
    assert errs[1] <= errs[0] + 1e-12 and errs[2] <= errs[1] + 1e-12
    assert errs[-1] <= 1e-2


def test_outside_band_derivatives_match_finite_differences():
    h = 1e-6
    for omega, w0 in ((3.0, 1.0), (0.6, 1.0), (2.3, 0.0)):
        k0, k1 = outside_band_derivatives(omega, w0)
        z = omega**2
        g_up, _ = limit_green_outside(np.sqrt(z + h), w0)
        g_dn, _ = limit_green_outside(np.sqrt(z - h), w0)
        assert k0 == pytest.approx((g_up - g_dn) / (2 * h), rel=1e-6)

        def gdiff(zz):
            om = np.sqrt(zz)
            return infinite_green(0, om, w0) - infinite_green(2, om, w0)

        assert k1 == pytest.approx((gdiff(z + h) - gdiff(z - h)) / (2 * h), rel=1e-6)


def test_limit_energy_reduction_without_right_damping():
    p = ChainParams(50, 1.0, 1.0, 0.0)
    omega, F = 3.0, 1.2
    k0, k1 = outside_band_derivatives(omega, 1.0)
    expected = F * F / 4.0 * (k0 * (omega**2 + 1.0) + k1)
    assert limit_energy_outside(omega, F, p) == pytest.approx(expected, rel=1e-12)


def test_finite_n_energy_converges_to_limit():
    closed = limit_energy_outside(3.0, 1.0, P11)
    errs = []
    for n in (250, 500, 1000):
        p = ChainParams(n, 1.0, 1.0, 1.0)
        errs.append(abs(total_mech_energy_closed(3.0, 1.0, p) - closed))
    assert errs[1] <= errs[0] + 1e-12 and errs[2] <= errs[1] + 1e-12
    assert errs[-1] < 1e-3


# --- inside band ------------------------------------------------------------

def test_scaling_point_midline_values():
    # u = 1/2 kills the cot(pi u) term and sin(pi u) = 1.
    point = scaling_point(0.4, 0.5, 1.0, P11)
    assert point.gbar0 == pytest.approx(-0.5, abs=1e-14)
    assert point.gbar1 == pytest.approx(-1.0 / np.tan(np.pi * 0.2) / 2.0, rel=1e-14)


def test_scaling_identity_and_periodicities():
    point = scaling_point(0.3, 0.37, 1.0, P11)
    assert 2 * point.hbar == pytest.approx(point.gbar0 + point.gbar1, abs=1e-12)
    shifted = scaling_point(0.3, 1.37, 1.0, P11)
    assert shifted.wbar == pytest.approx(point.wbar, abs=1e-12)
    assert shifted.gbar1 == pytest.approx(-point.gbar1, rel=1e-12)  # parity flip
    two = scaling_point(0.3, 2.37, 1.0, P11)
    assert two.ebar == pytest.approx(point.ebar, rel=1e-12)  # 2-periodic energy
    assert two.wbar == pytest.approx(point.wbar, abs=1e-12)


def test_scaling_work_bound():
    u = np.linspace(0.013, 0.987, 400)
    vals = scaled_work_values(1.0 / 3.0, u, 1.0, P11)
    bound = work_bound(float(dispersion(1.0 / 3.0, 1.0)), 1.0, P11)
    assert np.all(vals >= 0)
    assert np.all(vals <= bound)


def test_pole_guard_and_clamp():
    with pytest.raises(PoleError):
        scaling_point(0.3, 1.0 + 1e-12, 1.0, P11)
    point = scaling_point(0.3, 1.0 + 1e-12, 1.0, P11, clamp_poles=True)
    assert point.clamped
    assert np.isfinite(point.wbar)


def test_finite_n_tracks_scaling_work():
    # fixed fractional part: r = 1/3 with n + 1 = 1 (mod 3) pins u = 1/3.
    r = 1.0 / 3.0
    omega = float(dispersion(r, 1.0))
    for n in (300, 3000):
        p = ChainParams(n, 1.0, 1.0, 1.0)
        u = (n + 1) * r
        wbar = scaling_point(r, u - np.floor(u), 1.0, p).wbar
        assert abs(work(omega, 1.0, p).W - wbar) <= 1e-2


def test_finite_n_tracks_scaling_energy_density():
    # parity-fixed subsequence: n + 1 = 1 (mod 6) keeps floor(u) even.
    r = 1.0 / 3.0
    omega = float(dispersion(r, 1.0))
    errs = []
    for m in (4, 16, 64):
        n = 6 * m
        p = ChainParams(n, 1.0, 1.0, 1.0)
        point = scaling_point(r, (n + 1) * r, 1.0, p)
        errs.append(abs(total_mech_energy_closed(omega, 1.0, p) / n - point.ebar))
    assert errs[2] < errs[0]
    assert errs[2] < 5e-3


def test_mode_sums_track_scaling_limits():
    r = 1.0 / 3.0
    omega = float(dispersion(r, 1.0))
    sin_r2 = np.sin(np.pi * r / 2) ** 2
    errs_i0 = []
    errs_i1 = []
    for m in (4, 16, 64):
        n = 6 * m
        p = ChainParams(n, 1.0, 1.0, 1.0)
        u = (n + 1) * r
        i0, i1, j0, j1 = endpoint_derivatives(omega, p)
        su2 = np.sin(np.pi * u) ** 2
        lim_i0 = 1.0 / (8 * sin_r2 * su2)
        lim_i1 = np.cos(np.pi * u) * lim_i0
        lim_j0 = 1.0 / (2 * su2)
        lim_j1 = np.cos(np.pi * u) * lim_j0
        errs_i0.append(abs(i0 / (n + 1) - lim_i0))
        errs_i1.append(abs(i1 / (n + 1) - lim_i1))
        assert abs(j0 / (n + 1) - lim_j0) < 0.25 / m
        assert abs(j1 / (n + 1) - lim_j1) < 0.25 / m
    assert errs_i0[2] < errs_i0[0] and errs_i1[2] < errs_i1[0]


# --- value distribution -----------------------------------------------------

def test_young_histogram_normalization_and_support():
    hist = young_histogram(0.66, 1.0, P11, u_samples=4096, bins=64)
    assert hist.masses.sum() == pytest.approx(1.0, abs=1e-12)
    assert np.all(hist.masses >= 0)
    supported = hist.bin_edges[1:][hist.masses > 0]
    assert supported.max() <= work_bound(float(dispersion(0.66, 1.0)), 1.0, P11)
    with pytest.raises(ValueError):
        young_histogram(0.66, 1.0, P11, u_samples=100)
    with pytest.raises(ValueError):
        young_histogram(0.66, 1.0, P11, bins=4)


def test_young_mean_matches_frequency_window_average():
    mean_u = mean_scaled_work(0.66, 1.0, P11)
    mean_w = window_average_work(0.66, 4000, 1.0, P11)
    assert abs(mean_u - mean_w) / mean_u < 0.02


def test_histogram_concentrates_near_lower_band_edge():
    # approaching the lower edge the distribution collapses onto the
    # edge value of the limiting work
    p = ChainParams(50, 1.0, 1.0, 1.0)
    lower, _ = limit_work_band_edges(1.0, p)

    def moments(r):
        hist = young_histogram(r, 1.0, p, u_samples=4096, bins=32)
        centers = 0.5 * (hist.bin_edges[1:] + hist.bin_edges[:-1])
        mean = float(np.sum(centers * hist.masses))
        spread = float(np.sqrt(np.sum((centers - mean) ** 2 * hist.masses)))
        return mean, spread

    means, spreads = zip(*(moments(r) for r in (0.08, 0.02, 0.005)))
    errors = np.abs(np.array(means) - lower)
    assert np.all(np.diff(errors) < 0)
    assert np.all(np.diff(spreads) < 0)
    assert errors[-1] < 0.02 * lower and spreads[-1] < 0.05 * lower
