"""Work, energy, and current functionals of the periodic steady state.

Single-mode force F cos(omega t), theta = 2 pi / omega.  With the endpoint
Green's functions G^0, G^1 and

    N = gamma_- G1^2 + gamma_+ G0^2
        + 4 gamma_-^2 gamma_+ omega^2 (G0^2 - G1^2)^2,
    D = 1 + 8 gamma_- gamma_+ omega^2 G1^2
        + 4 omega^2 G0^2 (gamma_-^2 + gamma_+^2)
        + 16 gamma_-^2 gamma_+^2 omega^4 (G0^2 - G1^2)^2,

the period-averaged injected power is W = (omega F)^2 N / D, and it splits
into the reservoir fluxes

    W^- = gamma_- (omega F G1)^2 / D     (into the left reservoir),
    W^+ = W - W^-                        (into the right reservoir),

which are the dissipation rates 2 gamma ⟨pbar^2⟩ at the two thermostatted
ends; the mechanical bulk current is J_mech = -W^-.  (Quoting W^- without
the 1/D factor, as sometimes typeset, breaks both the gamma_+ = 0 identity
W^- = W and the quadrature profile check, so the 1/D form is used.)

Exactly on a finite-chain mode omega_j both N and D diverge like 1/eps^2
and the ratio stays finite:

    W(omega_j) = F^2/4 * (g+ + g- + 16 g+ g-^2 omega_j^2 S^2)
                       / ((g+ + g-)^2 + 16 g+^2 g-^2 omega_j^2 S^2),

with S = Gbar0 - (-1)^j Gbar1 built from the pole-subtracted endpoint sums.
(The leading 1/eps^2 coefficients of N and D contain S only through S^2; a
small-eps limit of the exact ratio confirms the square.)

The thermal sector (force-independent fluctuations) is handled by a
stationary covariance solve of the linear Langevin dynamics.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.linalg import solve_continuous_lyapunov

from . import _system
from .chain_core import (
    Band,
    BandLocation,
    ChainParams,
    ForceSpec,
    classify,
    spectrum,
)
from .errors import ConfigError, NumericalError, SolveError
from .greens import (
    endpoint_derivatives,
    endpoint_greens,
    greens_table,
    regularized_endpoints,
)
from .response import (
    ResponseAmplitudes,
    amplitudes_via_greens,
    multimode_amplitudes,
    superposed_means,
)

__all__ = [
    "WorkReport",
    "WorkGrid",
    "EnergyReport",
    "ThermalState",
    "nd_values",
    "work",
    "work_values",
    "work_resonant",
    "work_multimode",
    "work_quadrature",
    "work_bound",
    "mech_energy",
    "total_mech_energy_closed",
    "mech_currents",
    "thermal_state",
    "thermal_current_closed",
]


@dataclass(frozen=True)
class WorkReport:
    """Injected power and its reservoir split at one driving frequency."""

    omega: float
    W: float
    W_minus: float
    W_plus: float
    N: float
    D: float
    regime: BandLocation


@dataclass(frozen=True)
class EnergyReport:
    """Mechanical (and optionally thermal) energy content of the steady state.

    Mechanical fields are per-period time averages of the deterministic
    means; thermal fields are None unless filled from a ThermalState.
    """

    omega: float
    e_mech_site: np.ndarray
    E_mech: float
    J_mech: float
    e_th_site: np.ndarray | None = None
    E_th: float | None = None
    J_th: float | None = None


def nd_values(omega, g0, g1, sq_diff, params: ChainParams):
    """Work numerator N and denominator D from endpoint Green's values.

    Elementwise over arrays.  sq_diff must be G0^2 - G1^2 computed in a
    cancellation-safe form (product of even/odd mode sums) so that the
    ratio stays accurate arbitrarily close to resonances.
    """
    gm, gp = params.gamma_minus, params.gamma_plus
    w2 = omega * omega
    quart = sq_diff * sq_diff
    N = gm * g1 * g1 + gp * g0 * g0 + 4.0 * gm * gm * gp * w2 * quart
    D = (
        1.0
        + 8.0 * gm * gp * w2 * g1 * g1
        + 4.0 * w2 * g0 * g0 * (gm * gm + gp * gp)
        + 16.0 * gm * gm * gp * gp * w2 * w2 * quart
    )
    return N, D


@dataclass(frozen=True)
class WorkGrid:
    """Vectorized work quantities over a frequency grid."""

    omega: np.ndarray
    W: np.ndarray
    W_minus: np.ndarray
    W_plus: np.ndarray
    N: np.ndarray
    D: np.ndarray


def work_values(
    omegas: np.ndarray,
    F: float,
    params: ChainParams,
    *,
    check_resonance: bool = True,
) -> WorkGrid:
    """Closed-form work over a frequency grid (no per-point reports)."""
    if params.total_damping == 0.0:
        raise ConfigError("work requires damping somewhere: gamma_- + gamma_+ > 0")
    ends = endpoint_greens(omegas, params, check_resonance=check_resonance)
    N, D = nd_values(ends.omega, ends.g0, ends.g1, ends.sq_diff, params)
    W = (ends.omega * F) ** 2 * N / D
    Wm = params.gamma_minus * (ends.omega * F * ends.g1) ** 2 / D
    return WorkGrid(omega=ends.omega, W=W, W_minus=Wm, W_plus=W - Wm, N=N, D=D)


def work_bound(omega: float, F: float, params: ChainParams) -> float:
    """Upper bound (omega F)^2/4 (1/gamma_- + 1/gamma_+), infinite if a gamma is 0."""
    gm, gp = params.gamma_minus, params.gamma_plus
    if gm == 0.0 or gp == 0.0:
        return math.inf
    return (omega * F) ** 2 / 4.0 * (1.0 / gm + 1.0 / gp)


def work(
    omega: float,
    F: float,
    params: ChainParams,
    *,
    check_resonance: bool = True,
) -> WorkReport:
    """Closed-form work report away from resonances.

    Raises ResonanceError within tolerance of a mode (use work_resonant),
    and ConfigError when gamma_- = gamma_+ = 0 (no stationary periodic
    state exists: energy accumulates indefinitely).
    """
    if params.total_damping == 0.0:
        raise ConfigError("work requires damping somewhere: gamma_- + gamma_+ > 0")
    ends = endpoint_greens(omega, params, check_resonance=check_resonance)
    g0, g1, d2 = float(ends.g0[0]), float(ends.g1[0]), float(ends.sq_diff[0])
    N, D = nd_values(omega, g0, g1, d2, params)
    W = (omega * F) ** 2 * N / D
    W_minus = params.gamma_minus * (omega * F * g1) ** 2 / D
    # Cross-check against the response route: W = -(omega F / 2) Im qtilde_n.
    n_t = g0 + 2j * omega * params.gamma_minus * d2
    d_t = (
        1.0
        - 4.0 * params.gamma_plus * params.gamma_minus * omega**2 * d2
        + 2j * omega * (params.gamma_plus + params.gamma_minus) * g0
    )
    W_amp = -(omega * F / 2.0) * float(np.imag(F * n_t / d_t))
    if abs(W_amp - W) > 1e-9 * max(abs(W), (omega * F) ** 2):
        raise NumericalError(f"work identity violated: N/D route {W} vs amplitude route {W_amp}")
    return WorkReport(
        omega=float(omega),
        W=W,
        W_minus=W_minus,
        W_plus=W - W_minus,
        N=N,
        D=D,
        regime=classify(omega, params),
    )


def work_resonant(j: int, F: float, params: ChainParams) -> WorkReport:
    """Work exactly on mode omega_j via the pole-cancelled limit.

    The reported N, D are the 1/eps^2 pole coefficients normalized so that
    W = (omega_j F)^2 N / D still holds:

        N = g+ + g- + 16 g+ g-^2 omega_j^2 S^2,
        D = 4 omega_j^2 [(g+ + g-)^2 + 16 g+^2 g-^2 omega_j^2 S^2].

    W^- follows from the same limit of gamma_-(omega F G1)^2 / D.
    Limits: W -> F^2/(4 gamma_-) as gamma_+ -> 0 and symmetrically.
    """
    if params.total_damping == 0.0:
        raise ConfigError("resonant forcing with no damping has no stationary state")
    gm, gp = params.gamma_minus, params.gamma_plus
    wj = float(spectrum(params)[j])
    _, _, S = regularized_endpoints(j, params)
    s2 = wj * wj * S * S
    N = gp + gm + 16.0 * gp * gm * gm * s2
    D = 4.0 * wj * wj * ((gp + gm) ** 2 + 16.0 * gp * gp * gm * gm * s2)
    W = (wj * F) ** 2 * N / D
    W_minus = gm * F * F / (4.0 * ((gp + gm) ** 2 + 16.0 * gp * gp * gm * gm * s2))
    return WorkReport(
        omega=wj,
        W=W,
        W_minus=W_minus,
        W_plus=W - W_minus,
        N=N,
        D=D,
        regime=BandLocation(Band.RESONANCE, j=j),
    )


def work_multimode(force: ForceSpec, params: ChainParams) -> WorkReport:
    """Work of a general periodic force: harmonics contribute additively."""
    if params.total_damping == 0.0:
        raise ConfigError("work requires damping somewhere: gamma_- + gamma_+ > 0")
    W = Wm = 0.0
    for ell, amp in force.modes:
        rep = work(ell * force.omega_fundamental, amp, params)
        W += rep.W
        Wm += rep.W_minus
    return WorkReport(
        omega=force.omega_fundamental,
        W=W,
        W_minus=Wm,
        W_plus=W - Wm,
        N=math.nan,
        D=math.nan,
        regime=classify(force.omega_fundamental, params),
    )


def work_quadrature(force: ForceSpec, params: ChainParams, samples: int = 0) -> float:
    """Time-quadrature oracle: (1/theta) integral of F(t/theta) pbar_n(t) dt.

    Uniform periodic trapezoid over one period; exact up to roundoff for
    trigonometric integrands once samples exceeds twice the highest
    harmonic of the product (default 16x the highest force harmonic).
    Amplitudes come from the direct tridiagonal solve, keeping this path
    independent of the Green's-function closed forms.
    """
    if samples <= 0:
        samples = 16 * force.max_harmonic
    if samples < 4 * force.max_harmonic:
        raise ValueError("samples must be at least 4x the highest force harmonic")
    modes = multimode_amplitudes(force, params, method="solve")
    t = np.arange(samples) * (force.period / samples)
    _, p = superposed_means(modes, t)
    return float(np.mean(force.values(t) * p[:, -1]))


def mech_energy(omega: float, F: float, params: ChainParams) -> EnergyReport:
    """Per-site and total period-averaged mechanical energy.

    Site values use the response amplitudes qtilde_x = F(a G^1_x + b G^0_x):

        <e_x> = (1/4) [ (omega^2 + omega0^2) |qtilde_x|^2
                        + |qtilde_x - qtilde_{x-1}|^2 ],   qtilde_{-1} := qtilde_0,

    expressed through the real combinations G^1_x and
    curlyG_x = G^0 G^1_x - G^1 G^0_x.  The total is recomputed from the
    closed form in the d/d(omega^2) sums (total_mech_energy_closed) and the
    two routes are required to agree; E_mech is the site sum, so the
    identity E_mech = sum(e_mech_site) is exact by construction.
    """
    table = greens_table(omega, params)
    gm = params.gamma_minus
    curly = table.g0 * table.g1_site - table.g1 * table.g0_site
    grad_g1 = np.diff(table.g1_site, prepend=table.g1_site[0])
    grad_curly = np.diff(curly, prepend=curly[0])
    _, D = nd_values(omega, table.g0, table.g1, table.sq_diff, params)
    w2 = omega * omega
    pin2 = w2 + params.omega0**2
    damp2 = (2.0 * omega * gm) ** 2
    e_site = (F * F / (4.0 * D)) * (
        pin2 * (table.g1_site**2 + damp2 * curly**2) + grad_g1**2 + damp2 * grad_curly**2
    )
    E_sum = float(np.sum(e_site))
    E_closed = total_mech_energy_closed(omega, F, params)
    if abs(E_sum - E_closed) > 1e-8 * max(1.0, abs(E_sum)):
        raise NumericalError(
            f"mechanical energy routes disagree: site sum {E_sum} vs closed form {E_closed}"
        )
    J_mech = -params.gamma_minus * (omega * F * table.g1) ** 2 / D
    return EnergyReport(omega=float(omega), e_mech_site=e_site, E_mech=E_sum, J_mech=J_mech)


def total_mech_energy_closed(omega: float, F: float, params: ChainParams) -> float:
    """Total mechanical energy from the d/d(omega^2) mode sums.

    With I_s, J_s from endpoint_derivatives and the response coefficients
    a, b,

        E_mech = (F^2/4) { (|a|^2 + |b|^2) [(omega^2+omega0^2) I0 + J0]
                           + 2 Re(a* b)    [(omega^2+omega0^2) I1 + J1] },

    where |a|^2+|b|^2 = (1 + 4 omega^2 gamma_-^2 (G0^2+G1^2))/D and
    2 Re(a* b) = -8 omega^2 gamma_-^2 G0 G1 / D.  The cross-term factor is
    2 Re(a* b) (not Re(a* b)): the site-sum oracle fixes the convention.
    """
    i0, i1, j0, j1 = endpoint_derivatives(omega, params)
    ends = endpoint_greens(omega, params)
    g0, g1 = float(ends.g0[0]), float(ends.g1[0])
    _, D = nd_values(omega, g0, g1, float(ends.sq_diff[0]), params)
    gm2 = params.gamma_minus**2
    w2 = omega * omega
    pin2 = w2 + params.omega0**2
    diag = (1.0 + 4.0 * w2 * gm2 * (g0 * g0 + g1 * g1)) / D
    cross = -8.0 * w2 * gm2 * g0 * g1 / D
    return float(F * F / 4.0 * (diag * (pin2 * i0 + j0) + cross * (pin2 * i1 + j1)))


def mech_currents(
    omega: float,
    F: float,
    params: ChainParams,
    *,
    profile_tol: float = 1e-10,
    samples: int = 64,
) -> tuple[float, bool]:
    """Mechanical energy current and an x-independence check.

    J_mech = -gamma_-(omega F G1)^2 / D = -W^-.  The check evaluates the
    bulk current time-average <-pbar_x (qbar_{x+1} - qbar_x)> on every bond
    by periodic quadrature of the reconstructed means and compares against
    J_mech (tolerance relative to the work scale).
    """
    ends = endpoint_greens(omega, params)
    _, D = nd_values(omega, float(ends.g0[0]), float(ends.g1[0]), float(ends.sq_diff[0]), params)
    J_mech = -params.gamma_minus * (omega * F * float(ends.g1[0])) ** 2 / D
    amps = amplitudes_via_greens(omega, F, params)
    t = np.arange(samples) * (2.0 * math.pi / omega / samples)
    q, p = superposed_means([amps], t)
    bond = -(p[:, :-1] * (q[:, 1:] - q[:, :-1])).mean(axis=0)
    scale = max(1.0, (omega * F) ** 2)
    uniform = bool(np.max(np.abs(bond - J_mech)) <= profile_tol * scale)
    return J_mech, uniform


@dataclass(frozen=True)
class ThermalState:
    """Stationary covariance of the force-free fluctuations.

    For omega0 > 0 the covariance is over (q_0..q_n, p_0..p_n).  For
    omega0 = 0 the position block is only defined modulo the free
    center-of-mass mode, so the solve is done in stretch coordinates
    (r_x = q_{x+1} - q_x, p) and `reduced` is True; temperatures, energies
    and currents are unaffected by the gauge.
    """

    covariance: np.ndarray
    temperatures: np.ndarray
    e_th_site: np.ndarray
    E_th: float
    j_th_bonds: np.ndarray
    J_th: float
    reduced: bool


def _reduced_drift_and_noise(params: ChainParams) -> tuple[np.ndarray, np.ndarray]:
    # Stretch coordinates for the unpinned chain: state (r_0..r_{n-1}, p_0..p_n).
    n, m = params.n, params.sites
    dim = n + m
    M = np.zeros((dim, dim))
    for x in range(n):
        M[x, n + x + 1] = 1.0
        M[x, n + x] = -1.0
    for x in range(m):
        if x < n:
            M[n + x, x] += 1.0
        if x > 0:
            M[n + x, x - 1] -= 1.0
    M[n, n] -= 2.0 * params.gamma_minus
    M[dim - 1, dim - 1] -= 2.0 * params.gamma_plus
    Q = np.zeros((dim, dim))
    Q[n, n] = 4.0 * params.gamma_minus * params.T_minus
    Q[dim - 1, dim - 1] = 4.0 * params.gamma_plus * params.T_plus
    return M, Q


def thermal_state(params: ChainParams, *, residual_tol: float = 1e-10) -> ThermalState:
    """Solve the stationary covariance equation M S + S M^T + Q = 0.

    M is the drift of the force-free Langevin dynamics and Q the endpoint
    noise intensities 4*gamma*T.  Direct dense Lyapunov solve; raises
    SolveError if the residual or a negative eigenvalue beyond roundoff
    survives symmetrization.
    """
    if params.total_damping == 0.0:
        raise ConfigError("thermal state requires damping somewhere")
    n, m = params.n, params.sites
    if params.omega0 > 0:
        M = _system.drift_matrix(params)
        Q = _system.noise_covariance(params)
    else:
        M, Q = _reduced_drift_and_noise(params)
    S = solve_continuous_lyapunov(M, -Q)
    S = 0.5 * (S + S.T)
    scale = max(1.0, float(np.abs(Q).max()))
    resid = float(np.abs(M @ S + S @ M.T + Q).max())
    if resid > residual_tol * scale:
        raise SolveError(f"stationary covariance residual {resid:.3e} exceeds tolerance")
    eigmin = float(np.linalg.eigvalsh(S).min())
    if eigmin < -1e-10 * max(1.0, float(np.abs(S).max())):
        raise SolveError(f"stationary covariance has negative eigenvalue {eigmin:.3e}")

    if params.omega0 > 0:
        qq = S[:m, :m]
        qp = S[:m, m:]  # qp[x, y] = <q_x p_y>
        pp = S[m:, m:]
        grad_var = np.zeros(m)
        grad_var[1:] = np.diag(qq)[1:] - 2.0 * np.diag(qq, -1) + np.diag(qq)[:-1]
        pin_var = params.omega0**2 * np.diag(qq)
        # bond current <-p_x (q_{x+1} - q_x)> = -(<q_{x+1} p_x> - <q_x p_x>)
        bonds = -(np.diag(qp, -1) - np.diag(qp)[:-1])
    else:
        rr = S[:n, :n]
        rp = S[:n, n:]  # rp[x, y] = <r_x p_y>, r_x = q_{x+1} - q_x
        pp = S[n:, n:]
        grad_var = np.zeros(m)
        grad_var[1:] = np.diag(rr)
        pin_var = np.zeros(m)
        bonds = -np.diag(rp)
    temps = np.diag(pp).copy()
    e_site = 0.5 * (temps + pin_var + grad_var)
    return ThermalState(
        covariance=S,
        temperatures=temps,
        e_th_site=e_site,
        E_th=float(np.sum(e_site)),
        j_th_bonds=np.asarray(bonds, dtype=float),
        J_th=float(np.asarray(bonds)[n // 2]),
        reduced=params.omega0 == 0,
    )


def thermal_current_closed(gamma: float, omega0: float) -> float:
    """Large-n thermal conductance c with J_th = c (T_- - T_+), equal damping.

    c = gamma / (1 + 4 gamma^2 + 2 gamma omega0 (gamma omega0
        + sqrt(1 + 4 gamma^2 + (gamma omega0)^2))); for omega0 = 0 this is
    gamma/(1 + 4 gamma^2) with no n-dependence at all.
    """
    if gamma <= 0:
        raise ValueError("gamma must be > 0")
    g2 = gamma * gamma
    root = math.sqrt(1.0 + 4.0 * g2 + (gamma * omega0) ** 2)
    return gamma / (1.0 + 4.0 * g2 + 2.0 * gamma * omega0 * (gamma * omega0 + root))
