import numpy as np
import pytest

from chainwork import (
    Band,
    ChainParams,
    ConfigError,
    ForceSpec,
    ResonanceError,
    amplitudes_via_solve,
    endpoint_derivatives,
    endpoint_greens,
    mech_currents,
    mech_energy,
    spectrum,
    thermal_current_closed,
    thermal_state,
    total_mech_energy_closed,
    work,
    work_bound,
    work_multimode,
    work_quadrature,
    work_resonant,
    work_values,
)
from chainwork._system import pinned_operator


# --- work -------------------------------------------------------------------

def test_zero_force_zero_work():
    p = ChainParams(8, 1.0, 1.0, 1.0)
    rep = work(1.5, 0.0, p)
    assert rep.W == 0.0
    assert rep.W_minus == 0.0 and rep.W_plus == 0.0


def test_no_damping_is_a_config_error():
    with pytest.raises(ConfigError):
        work(1.5, 1.0, ChainParams(8, 1.0, 0.0, 0.0))


def test_work_split_is_exact_and_nonnegative():
    rng = np.random.default_rng(3)
    for _ in range(50):
        p = ChainParams(
            int(rng.integers(1, 40)),
            float(rng.uniform(0, 2)),
            float(rng.choice([0.0, 0.2, 1.0, 5.0])),
            float(rng.choice([0.0, 0.2, 1.0, 5.0])),
        )
        if p.total_damping == 0:
            continue
        omega = float(rng.uniform(0.1, 4.0))
        try:
            rep = work(omega, 1.3, p)
        except ResonanceError:
            continue
        # W_plus is defined as W - W_minus, so it can undershoot zero by roundoff.
        assert rep.W >= 0 and rep.W_minus >= 0
        assert rep.W_plus >= -1e-15 * max(1.0, rep.W)
        assert rep.W == pytest.approx(rep.W_minus + rep.W_plus, rel=1e-14)


def test_left_only_damping_closed_form():
    # With gamma_+ = 0 the ratio collapses to
    # W = (omega F)^2 gamma_- G1^2 / (1 + 4 gamma_-^2 omega^2 G0^2).
    p = ChainParams(8, 1.0, 1.0, 0.0)
    omega, F = 1.5, 1.0
    ends = endpoint_greens(omega, p)
    g0, g1 = float(ends.g0[0]), float(ends.g1[0])
    expected = (omega * F) ** 2 * g1**2 / (1 + 4 * omega**2 * g0**2)
    rep = work(omega, F, p)
    assert rep.W == pytest.approx(expected, rel=1e-12)
    assert rep.W_minus == pytest.approx(rep.W, rel=1e-12)  # all work exits left


def test_work_matches_quadrature_oracle():
    p = ChainParams(50, 1.0, 1.0, 1.0)
    rep = work(3.0, 1.0, p)
    wq = work_quadrature(ForceSpec.single(3.0, 1.0), p)
    assert abs(rep.W - wq) < 1e-10


def test_quadrature_sample_count_independence():
    p = ChainParams(8, 1.0, 1.0, 1.0)
    f = ForceSpec.single(1.5, 1.0)
    w64 = work_quadrature(f, p, samples=64)
    w4096 = work_quadrature(f, p, samples=4096)
    assert abs(w64 - w4096) < 1e-13


def test_work_bound_on_grid():
    grid = np.linspace(0.11, 4.87, 500)
    for n in (5, 50):
        for gm, gp in ((1.0, 1.0), (1.0, 0.1)):
            p = ChainParams(n, 1.0, gm, gp)
            wj2 = spectrum(p) ** 2
            safe = grid[np.min(np.abs(wj2[None, :] - grid[:, None] ** 2), axis=1) > 1e-6]
            vals = work_values(safe, 1.0, p, check_resonance=False)
            bound = safe**2 / 4 * (1 / gm + 1 / gp)
            assert np.all(vals.W <= bound)


def test_regime_tag_in_report():
    p = ChainParams(8, 1.0, 1.0, 1.0)
    assert work(3.0, 1.0, p).regime.band is Band.ABOVE
    assert work_resonant(2, 1.0, p).regime.j == 2


# --- resonance --------------------------------------------------------------

def test_resonant_work_limits_in_damping():
    p_left = ChainParams(20, 1.0, 2.0, 1e-9)
    rep = work_resonant(5, 1.0, p_left)
    assert rep.W == pytest.approx(1.0 / (4 * 2.0), rel=1e-6)
    p_right = ChainParams(20, 1.0, 1e-9, 0.7)
    rep = work_resonant(5, 1.0, p_right)
    assert rep.W == pytest.approx(1.0 / (4 * 0.7), rel=1e-6)


def test_resonant_work_is_small_eps_limit():
    p = ChainParams(20, 1.0, 1.0, 1.0)
    wj = float(spectrum(p)[5])
    rep = work_resonant(5, 1.0, p)
    w_eps = work_values(
        np.array([np.sqrt(wj**2 + 1e-12 / 20)]), 1.0, p, check_resonance=False
    ).W[0]
    assert abs(w_eps - rep.W) <= 1e-5
    assert rep.W == pytest.approx((wj * 1.0) ** 2 * rep.N / rep.D, rel=1e-14)


def test_resonant_reservoir_split_continuity():
    p = ChainParams(20, 1.0, 1.0, 0.3)
    wj = float(spectrum(p)[7])
    rep = work_resonant(7, 1.0, p)
    grid = work_values(np.array([np.sqrt(wj**2 + 1e-10)]), 1.0, p, check_resonance=False)
    assert float(grid.W_minus[0]) == pytest.approx(rep.W_minus, rel=1e-4)
    assert rep.W == pytest.approx(rep.W_minus + rep.W_plus, rel=1e-14)


def test_resonance_table_goldens():
    # Frozen from the small-eps limit of the exact ratio (Richardson in eps,
    # cross-checked at n = 20 over all modes to 1e-11 relative).
    p11 = ChainParams(50, 1.0, 1.0, 1.0)
    p110 = ChainParams(50, 1.0, 1.0, 0.1)
    golden = {
        1: (1.0018948760, 0.1876183175, 0.3002670189),
        10: (1.1694469527, 0.1972040573, 0.3255785837),
        25: (1.7141790697, 0.2182613025, 0.4284937048),
        40: (2.1349850466, 0.2275105477, 0.5248884822),
        50: (2.2352195994, 0.2291534870, 0.5494354848),
    }
    wj = spectrum(p11)
    for j, (w, w11, w110) in golden.items():
        assert float(wj[j]) == pytest.approx(w, abs=5e-10)
        assert work_resonant(j, 1.0, p11).W == pytest.approx(w11, abs=5e-10)
        assert work_resonant(j, 1.0, p110).W == pytest.approx(w110, abs=5e-10)


# --- multimode --------------------------------------------------------------

def test_multimode_single_mode_reduces():
    p = ChainParams(8, 1.0, 1.0, 1.0)
    rep1 = work(1.5, 1.0, p)
    repm = work_multimode(ForceSpec.single(1.5, 1.0), p)
    assert repm.W == pytest.approx(rep1.W, rel=1e-14)


def test_multimode_adds_per_mode():
    p = ChainParams(8, 1.0, 1.0, 1.0)
    force = ForceSpec(omega_fundamental=0.9, modes=((1, 0.7), (2, 1.1)))
    repm = work_multimode(force, p)
    expected = work(0.9, 0.7, p).W + work(1.8, 1.1, p).W
    assert repm.W == pytest.approx(expected, rel=1e-14)


def test_multimode_quadrature_oracle():
    p = ChainParams(6, 1.0, 1.0, 1.0)
    force = ForceSpec(omega_fundamental=0.9, modes=((1, 0.7), (2, 1.1)))
    assert abs(work_multimode(force, p).W - work_quadrature(force, p)) < 1e-9


# --- mechanical energy ------------------------------------------------------

def test_mech_energy_zero_force():
    p = ChainParams(8, 1.0, 1.0, 1.0)
    rep = mech_energy(1.5, 0.0, p)
    assert np.all(rep.e_mech_site == 0.0)
    assert rep.E_mech == 0.0


def time_averaged_energy_from_amplitudes(omega, F, params, samples=256):
    """Independent oracle: quadrature of the instantaneous mean energy."""
    amps = amplitudes_via_solve(omega, F, params)
    t = np.arange(samples) * (2 * np.pi / omega / samples)
    phase = np.exp(1j * omega * t)[:, None]
    q = np.real(phase * amps.q_tilde[None, :])
    pm = np.real(phase * amps.p_tilde[None, :])
    grad = np.diff(q, axis=1, prepend=q[:, :1])
    dens = 0.5 * (pm**2 + params.omega0**2 * q**2 + grad**2)
    return dens.mean(axis=0)


def test_mech_energy_against_quadrature_oracle():
    p = ChainParams(12, 1.0, 1.0, 1.0)
    omega, F = 1.5, 1.0
    rep = mech_energy(omega, F, p)
    oracle_site = time_averaged_energy_from_amplitudes(omega, F, p)
    assert np.abs(rep.e_mech_site - oracle_site).max() < 1e-12
    assert rep.E_mech == pytest.approx(oracle_site.sum(), abs=1e-9)
    assert total_mech_energy_closed(omega, F, p) == pytest.approx(rep.E_mech, abs=1e-8)
    assert np.all(rep.e_mech_site >= 0)


def test_mode_sum_derivatives_match_finite_differences():
    p = ChainParams(10, 1.0, 1.0, 1.0)
    omega = 1.7
    h = 1e-6
    analytic = endpoint_derivatives(omega, p)
    z = omega**2
    up = endpoint_greens(np.sqrt(z + h), p)
    dn = endpoint_greens(np.sqrt(z - h), p)
    fd_i0 = (float(up.g0[0]) - float(dn.g0[0])) / (2 * h)
    fd_i1 = (float(up.g1[0]) - float(dn.g1[0])) / (2 * h)
    assert analytic[0] == pytest.approx(fd_i0, rel=1e-6)
    assert analytic[1] == pytest.approx(fd_i1, rel=1e-6)
    # gradient-sector sums against an independent spectral evaluation
    wj2 = spectrum(p) ** 2
    j = np.arange(1, 11)
    fd_j0 = (2 / 11) * np.sum(np.sin(np.pi * j / 11) ** 2 / (wj2[1:] - z) ** 2)
    assert analytic[2] == pytest.approx(fd_j0, rel=1e-12)


# --- mechanical currents ----------------------------------------------------

def test_currents_zero_without_left_damping():
    p = ChainParams(8, 1.0, 0.0, 1.0)
    j_mech, uniform = mech_currents(1.5, 1.0, p)
    assert j_mech == 0.0
    assert uniform


def test_current_profile_is_flat():
    p = ChainParams(12, 1.0, 1.0, 1.0)
    j_mech, uniform = mech_currents(1.5, 1.0, p)
    assert uniform
    rep = work(1.5, 1.0, p)
    assert j_mech == pytest.approx(-rep.W_minus, rel=1e-12)


def test_current_dies_outside_band():
    p_small = ChainParams(50, 1.0, 1.0, 1.0)
    p_big = ChainParams(800, 1.0, 1.0, 1.0)
    j_small, _ = mech_currents(3.0, 1.0, p_small)
    j_big, _ = mech_currents(3.0, 1.0, p_big)
    assert abs(j_big) < abs(j_small) or abs(j_big) < 1e-14
    assert abs(j_big) < 1e-12


# --- thermal sector ---------------------------------------------------------

def test_equilibrium_is_gibbs():
    T = 0.8
    p = ChainParams(12, 1.0, 1.0, 0.4, T_minus=T, T_plus=T)
    st = thermal_state(p)
    assert np.abs(st.temperatures - T).max() < 1e-10
    m = p.sites
    qq = st.covariance[:m, :m]
    assert np.abs(qq - T * np.linalg.inv(pinned_operator(p))).max() < 1e-10
    assert np.abs(st.covariance[:m, m:]).max() < 1e-10
    assert np.abs(st.j_th_bonds).max() < 1e-12


def test_unpinned_current_exact_and_size_independent():
    for n in (8, 16, 32):
        p = ChainParams(n, 0.0, 1.0, 1.0, T_minus=1.0, T_plus=0.0)
        st = thermal_state(p)
        assert st.reduced
        assert abs(st.J_th - 0.2) < 1e-10
        assert np.abs(st.j_th_bonds - 0.2).max() < 1e-10


def test_pinned_current_approaches_closed_form():
    # convergence to the large-n conductance is exponential in n (about
    # three decades per doubling here), so the halving check runs on small
    # n where the deviation is still above roundoff
    c = thermal_current_closed(1.0, 1.0)
    errs = []
    for n in (4, 8, 16, 64):
        p = ChainParams(n, 1.0, 1.0, 1.0, T_minus=1.0, T_plus=0.5)
        st = thermal_state(p)
        errs.append(abs(st.J_th - c * 0.5))
    assert errs[1] <= errs[0] / 2
    assert errs[2] <= errs[1] / 2
    assert errs[3] / (c * 0.5) < 0.01


def test_bulk_temperature_profile_flat():
    # Boundary layer decays by roughly 5.7x per site at these parameters;
    # six sites in the deviation is already below 1e-6 for a 0.1 bias.
    p = ChainParams(64, 1.0, 1.0, 1.0, T_minus=0.6, T_plus=0.5)
    st = thermal_state(p)
    mid = st.temperatures[32]
    assert mid == pytest.approx(0.55, abs=1e-8)
    assert np.abs(st.temperatures[6:-6] - mid).max() < 1e-6


def test_thermal_energy_density_extensive():
    p = ChainParams(128, 1.0, 1.0, 1.0, T_minus=1.0, T_plus=0.5)
    st = thermal_state(p)
    assert st.E_th / 128 == pytest.approx(0.75, rel=0.02)
    bulk = st.e_th_site[10:-10]
    assert np.abs(bulk - 0.75).max() < 0.01


def test_thermal_current_closed_values():
    assert thermal_current_closed(1.0, 0.0) == pytest.approx(0.2, abs=1e-15)
    # independent arithmetic: 1/(1 + 4 + 2(1 + sqrt(6)))
    assert thermal_current_closed(1.0, 1.0) == pytest.approx(
        1.0 / (7.0 + 2.0 * np.sqrt(6.0)), rel=1e-14
    )
    grid = np.linspace(0.0, 3.0, 31)
    vals = [thermal_current_closed(1.0, w0) for w0 in grid]
    assert np.all(np.diff(vals) < 0)


def test_work_bound_helper():
    p = ChainParams(8, 1.0, 2.0, 0.5)
    assert work_bound(1.5, 1.0, p) == pytest.approx(1.5**2 / 4 * (0.5 + 2.0))
    assert work_bound(1.5, 1.0, ChainParams(8, 1.0, 0.0, 1.0)) == np.inf
