"""Large-n limits: outside-band limits and inside-band scaling functions.

Outside the phonon band the endpoint Green's function has the n -> infinity
limit

    Gbar0(omega) = -1/2 + |omega0^2 + 4 - omega^2|
                   / (2 sqrt((omega0^2 - omega^2)(omega0^2 + 4 - omega^2))),
    Gbar1(omega) = 0,

giving closed-form limits for the work (through H = omega Gbar0) and for
the total mechanical energy (through d/d(omega^2) of Gbar0 and of the
full-lattice Green's function combination Gamma_0 - Gamma_2).

Inside the band the finite-n quantities oscillate on the scale of the mode
spacing and converge only along the two-variable scaling functions of
(r, u) with u = (n+1) r:

    Gbar0(r, u) = -1/2 (cot(pi r/2) cot(pi u) + 1),
    Gbar1(r, u) = -cot(pi r/2) / (2 sin(pi u)),
    Hbar(r, u)  = -1/4 (cot(pi r/2) cot(pi u/2) + 1),

with 2 Hbar = Gbar0 + Gbar1 identically.  All formulas here take the
UNREDUCED scaling coordinate u: the sign of sin(pi u) and the value of
cos(pi u) then carry the floor-parity (-1)^[u] bookkeeping exactly, so
Gbar1 flips sign under u -> u+1 while the work function Wbar (which sees
Gbar1 only through even powers) is 1-periodic, and the energy density ebar
is 2-periodic.  The mode sums I_s, J_s scale linearly in n with limits

    I0/(n+1) -> 1/(8 sin^2(pi r/2) sin^2(pi u)),   I1 = cos(pi u) I0,
    J0/(n+1) -> 1/(2 sin^2(pi u)),                 J1 = cos(pi u) J0.

The distribution of Wbar(r, u) over uniform u in (0, 1) is the limiting
(Young-measure) value distribution of the fast-oscillating finite-n work
near omega(r); young_histogram materializes it, and window_average_work is
the finite-n frequency-window oracle it is checked against.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

from .chain_core import ChainParams, band_edges, dispersion, spectrum
from .errors import PoleError
from .observables import nd_values, work_values

__all__ = [
    "ScalingPoint",
    "YoungHistogram",
    "limit_green_outside",
    "limit_work_outside",
    "limit_work_band_edges",
    "limit_energy_outside",
    "outside_band_derivatives",
    "scaling_point",
    "scaled_work_values",
    "mean_scaled_work",
    "young_histogram",
    "window_average_work",
]

_POLE_TOL = 1e-9


def _require_outside(omega: float, omega0: float) -> None:
    lo, hi = band_edges(omega0)
    if lo <= omega <= hi:
        raise ValueError(f"omega={omega!r} must lie strictly outside the band [{lo}, {hi}]")


def limit_green_outside(omega: float, omega0: float) -> tuple[float, float]:
    """(Gbar0, Gbar1) limits of the endpoint Green's functions outside the band."""
    _require_outside(omega, omega0)
    alpha = omega0**2 - omega**2
    beta = alpha + 4.0
    gbar0 = -0.5 + abs(beta) / (2.0 * math.sqrt(alpha * beta))
    return gbar0, 0.0


def limit_work_outside(omega: float, F: float, params: ChainParams) -> float:
    """Limiting work for driving outside the band.

    With H = omega Gbar0(omega):

        Wbar = gamma_+ (F H)^2 (1 + 4 (gamma_- H)^2)
               / (1 + 4 (gamma_+^2 + gamma_-^2) H^2 + 16 (gamma_+ gamma_- H^2)^2).

    Vanishes as gamma_+ -> 0 and as omega -> 0 or infinity: off-band work
    survives only through dissipation at the driven end.
    """
    gbar0, _ = limit_green_outside(omega, params.omega0)
    h = omega * gbar0
    gm, gp = params.gamma_minus, params.gamma_plus
    h2 = h * h
    return gp * (F * h) ** 2 * (1.0 + 4.0 * gm * gm * h2) / (
        1.0 + 4.0 * (gp * gp + gm * gm) * h2 + 16.0 * (gp * gm * h2) ** 2
    )


def limit_work_band_edges(F: float, params: ChainParams) -> tuple[float, float]:
    """Boundary values of the limiting work at the two band edges.

    Lower edge (omega -> omega0 from below): F^2 / (4 gamma_+), infinite
    when gamma_+ = 0.  Upper edge (omega -> sqrt(omega0^2+4) from above):

        gamma_+ F^2 (omega0^2+4)/4 * (1 + gamma_-^2 (omega0^2+4))
        / (1 + (gamma_-^2+gamma_+^2)(omega0^2+4) + gamma_-^2 gamma_+^2 (omega0^2+4)^2).
    """
    gm, gp = params.gamma_minus, params.gamma_plus
    lower = math.inf if gp == 0.0 else F * F / (4.0 * gp)
    s = params.omega0**2 + 4.0
    upper = (
        gp * F * F * s / 4.0 * (1.0 + gm * gm * s)
        / (1.0 + (gm * gm + gp * gp) * s + gm * gm * gp * gp * s * s)
    )
    return lower, upper


def outside_band_derivatives(omega: float, omega0: float) -> tuple[float, float]:
    """(K0, K1): d/d(omega^2) of Gbar0 and of Gamma_0 - Gamma_2.

    Closed forms with z = omega^2, alpha = omega0^2 - z, beta = alpha + 4,
    P = alpha beta and the decaying root lambda = 1 + alpha/2 + s sqrt(P)/2
    (s = sign of alpha):

        K0 = |beta| / P^(3/2),
        K1 = d/dz [ s P^(-1/2) (1 - lambda^(-2)) ].
    """
    _require_outside(omega, omega0)
    z = omega * omega
    alpha = omega0**2 - z
    beta = alpha + 4.0
    prod = alpha * beta
    s = 1.0 if alpha > 0 else -1.0
    root = math.sqrt(prod)
    k0 = abs(beta) / prod**1.5
    lam = 1.0 + alpha / 2.0 + s * root / 2.0
    dG0 = s * (alpha + 2.0) / prod**1.5
    dlam = -0.5 - s * (alpha + 2.0) / (2.0 * root)
    dG2 = s * ((alpha + 2.0) / prod**1.5 / lam**2 - 2.0 / root / lam**3 * dlam)
    return k0, dG0 - dG2


def limit_energy_outside(omega: float, F: float, params: ChainParams) -> float:
    """Limiting total mechanical energy for driving outside the band.

    E = F^2 (1 + 4 (gamma_- H)^2)
        / (4 [1 + 4 (gamma_-^2 + gamma_+^2) H^2 + 16 (gamma_+ gamma_- H^2)^2])
        * [K0 (omega^2 + omega0^2) + K1];

    for gamma_+ -> 0 the prefactor reduces to F^2/4.
    """
    gbar0, _ = limit_green_outside(omega, params.omega0)
    h = omega * gbar0
    h2 = h * h
    gm, gp = params.gamma_minus, params.gamma_plus
    k0, k1 = outside_band_derivatives(omega, params.omega0)
    pref = F * F * (1.0 + 4.0 * gm * gm * h2) / (
        4.0 * (1.0 + 4.0 * (gm * gm + gp * gp) * h2 + 16.0 * (gp * gm * h2) ** 2)
    )
    return pref * (k0 * (omega**2 + params.omega0**2) + k1)


@dataclass(frozen=True)
class ScalingPoint:
    """Inside-band scaling functions evaluated at one (r, u).

    clamped is True when u was nudged off an integer pole by the caller's
    request rather than rejected.
    """

    r: float
    u: float
    gbar0: float
    gbar1: float
    hbar: float
    wbar: float
    wbar_minus: float
    ebar: float
    clamped: bool = False


def _scaling_greens(r: float, u: np.ndarray):
    cot_r = 1.0 / math.tan(math.pi * r / 2.0)
    sin_u = np.sin(np.pi * u)
    gbar0 = -0.5 * (cot_r / np.tan(np.pi * u) + 1.0)
    gbar1 = -cot_r / (2.0 * sin_u)
    hbar = -0.25 * (cot_r / np.tan(np.pi * u / 2.0) + 1.0)
    # G0^2 - G1^2 = (G0 - G1)(G0 + G1); only the second factor (=2 Hbar)
    # carries the u -> 0 pole, so the product form stays accurate near it.
    diff = -0.5 + 0.5 * cot_r * np.tan(np.pi * u / 2.0)
    sq_diff = diff * 2.0 * hbar
    return gbar0, gbar1, hbar, sq_diff


def scaled_work_values(
    r: float, u: float | np.ndarray, F: float, params: ChainParams
) -> np.ndarray:
    """Wbar(r, u) on an array of scaling coordinates (poles not checked)."""
    u = np.atleast_1d(np.asarray(u, dtype=float))
    om = dispersion(r, params.omega0)
    gbar0, gbar1, _, sq_diff = _scaling_greens(r, u)
    N, D = nd_values(om, gbar0, gbar1, sq_diff, params)
    return (om * F) ** 2 * N / D


def scaling_point(
    r: float,
    u: float,
    F: float,
    params: ChainParams,
    *,
    clamp_poles: bool = False,
) -> ScalingPoint:
    """All inside-band scaling functions at one (r, u).

    r must lie strictly in (0, 1); u may be any real away from the integer
    poles of the cotangents.  With clamp_poles=True a u within 1e-9 of an
    integer is moved to 1e-9 away and the result flagged; otherwise
    PoleError is raised.  Pass the unreduced u = (n+1) r when comparing
    with a finite chain: its floor parity determines the sign of gbar1 and
    the 2-periodic branch of ebar.
    """
    if not 0.0 < r < 1.0:
        raise ValueError(f"r must lie strictly in (0, 1), got {r!r}")
    clamped = False
    dist = abs(u - round(u))
    if dist < _POLE_TOL:
        if not clamp_poles:
            raise PoleError(f"u={u!r} is within {_POLE_TOL} of an integer pole")
        u = round(u) + math.copysign(_POLE_TOL, u - round(u) if u != round(u) else 1.0)
        clamped = True
    ua = np.array([u])
    om = dispersion(r, params.omega0)
    gbar0, gbar1, hbar, sq_diff = _scaling_greens(r, ua)
    N, D = nd_values(om, gbar0, gbar1, sq_diff, params)
    wbar = float((om * F) ** 2 * N[0] / D[0])
    wbar_minus = float(params.gamma_minus * (om * F * gbar1[0]) ** 2 / D[0])

    # Energy density: mode sums scale like n; their (r, u) limits below.
    sin_r2 = math.sin(math.pi * r / 2.0) ** 2
    sin_u2 = float(np.sin(np.pi * u) ** 2)
    cos_u = float(np.cos(np.pi * u))
    i0 = 1.0 / (8.0 * sin_r2 * sin_u2)
    j0 = 1.0 / (2.0 * sin_u2)
    i1 = cos_u * i0
    j1 = cos_u * j0
    gm2 = params.gamma_minus**2
    w2 = om * om
    pin2 = w2 + params.omega0**2
    diag = (1.0 + 4.0 * w2 * gm2 * (gbar0[0] ** 2 + gbar1[0] ** 2)) / D[0]
    cross = -8.0 * w2 * gm2 * gbar0[0] * gbar1[0] / D[0]
    ebar = float(F * F / 4.0 * (diag * (pin2 * i0 + j0) + cross * (pin2 * i1 + j1)))

    return ScalingPoint(
        r=float(r),
        u=float(u),
        gbar0=float(gbar0[0]),
        gbar1=float(gbar1[0]),
        hbar=float(hbar[0]),
        wbar=wbar,
        wbar_minus=wbar_minus,
        ebar=ebar,
        clamped=clamped,
    )


@dataclass(frozen=True)
class YoungHistogram:
    """Binned value distribution of Wbar(r, .) under uniform u in (0, 1)."""

    r: float
    bin_edges: np.ndarray
    masses: np.ndarray
    u_samples: int


def young_histogram(
    r: float,
    F: float,
    params: ChainParams,
    u_samples: int = 4096,
    bins: int = 64,
) -> YoungHistogram:
    """Pushforward of the uniform u-measure through u -> Wbar(r, u).

    Midpoint sampling of (0, 1) keeps every sample at least 1/(2 u_samples)
    away from the integer poles, a set of measure zero for the limit
    object.  Masses sum to one; the support respects the work bound
    F^2/4 (1/gamma_- + 1/gamma_+).
    """
    if u_samples < 1000:
        raise ValueError("u_samples must be >= 1000 for a stable histogram")
    if bins < 16:
        raise ValueError("bins must be >= 16")
    u = (np.arange(u_samples) + 0.5) / u_samples
    vals = scaled_work_values(r, u, F, params)
    counts, edges = np.histogram(vals, bins=bins)
    return YoungHistogram(
        r=float(r),
        bin_edges=edges,
        masses=counts / float(u_samples),
        u_samples=int(u_samples),
    )


def mean_scaled_work(r: float, F: float, params: ChainParams, u_samples: int = 20000) -> float:
    """Mean of Wbar(r, .) over uniform u (identity test function)."""
    u = (np.arange(u_samples) + 0.5) / u_samples
    return float(np.mean(scaled_work_values(r, u, F, params)))


def window_average_work(
    r: float,
    n: int,
    F: float,
    params: ChainParams,
    *,
    modes_each_side: int = 20,
    points_per_gap: int = 48,
) -> float:
    """Finite-n work averaged over a frequency window around omega(r).

    The window covers a whole number of inter-mode gaps centered on the
    mode nearest (n+1) r, with midpoint sampling uniform in omega^2 inside
    each gap; in the scaling regime the gap coordinate sweeps u uniformly
    over (0, 1), so this converges to the u-average of Wbar(r, .).
    """
    p = replace(params, n=n)
    wj2 = spectrum(p) ** 2
    jstar = int(round((n + 1) * r))
    lo = max(1, jstar - modes_each_side)
    hi = min(n - 1, jstar + modes_each_side)
    t = (np.arange(points_per_gap) + 0.5) / points_per_gap
    om2 = np.concatenate(
        [wj2[j] + t * (wj2[j + 1] - wj2[j]) for j in range(lo, hi)]
    )
    grid = np.sqrt(om2)
    res = work_values(grid, F, p, check_resonance=False)
    return float(np.mean(res.W))
