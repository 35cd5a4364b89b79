"""Lattice Green's functions of the pinned Neumann operator -Delta_N + omega0^2 - omega^2.

All finite-chain functions are cosine mode sums over the normal modes
omega_j, j = 0..n.  The endpoint values

    G^0(omega, n) = G_{0,0},    G^1(omega, n) = G_{0,n}

drive the closed-form work and energy expressions.  Internally the endpoint
sums are kept split into even-j and odd-j parts: G^0 = E + O, G^1 = E - O,
so that G^0^2 - G^1^2 = 4*E*O is a product of two separately-computed sums.
Near a resonance only one of E, O carries the 1/eps pole, and the product
form avoids the catastrophic cancellation that a literal difference of
squares suffers there.

Sign convention for the pole: with eps := omega^2 - omega_j^2,

    G^s = -2 (-1)^{js} cos^2(pi j / (2(n+1))) / ((n+1) eps) + Gbar^s + O(eps),

and for j = 0 the singular term is the base term -1/((n+1) eps).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .chain_core import ChainParams, band_edges, nearest_mode, resonance_tolerance, spectrum
from .errors import ResonanceError

__all__ = [
    "GreensTable",
    "EndpointGreens",
    "green",
    "greens_table",
    "endpoint_greens",
    "endpoint_derivatives",
    "regularized_endpoints",
    "infinite_green",
    "full_green_matrix",
    "pole_coefficient",
]


@dataclass(frozen=True)
class GreensTable:
    """Endpoint-anchored Green's function rows at one frequency.

    g0_site[x] = G_{0,x} and g1_site[x] = G_{x,n}; g0 and g1 are the
    endpoint values G_{0,0} and G_{0,n}.  By reflection symmetry of the
    chain G_{n,n} = G_{0,0}, so g0_site[n] = g1_site[0] = g1 and
    g1_site[n] = g0.
    """

    omega: float
    n: int
    g0_site: np.ndarray
    g1_site: np.ndarray
    g0: float
    g1: float
    # G0^2 - G1^2 evaluated in product form (cancellation-safe near poles).
    sq_diff: float


@dataclass(frozen=True)
class EndpointGreens:
    """Vectorized endpoint values over a frequency grid."""

    omega: np.ndarray
    g0: np.ndarray
    g1: np.ndarray
    sq_diff: np.ndarray  # G0^2 - G1^2 via the even/odd product form


def _check_resonance(omega: float, params: ChainParams) -> None:
    j, dist = nearest_mode(omega, params)
    wj2 = spectrum(params)[j] ** 2
    if dist < resonance_tolerance(wj2):
        raise ResonanceError(omega, j)


def _mode_tables(params: ChainParams):
    n = params.n
    j = np.arange(1, n + 1)
    wj2 = spectrum(params) ** 2
    cos2 = np.cos(np.pi * j / (2.0 * (n + 1))) ** 2
    return j, wj2, cos2


def endpoint_greens(
    omega: float | np.ndarray,
    params: ChainParams,
    *,
    check_resonance: bool = True,
) -> EndpointGreens:
    """Endpoint Green's functions G^0, G^1 on a frequency grid.

    Off-resonance is required unless check_resonance=False; the caller then
    takes responsibility for the 1/eps blow-up (the product-form sq_diff
    stays accurate arbitrarily close to the pole, which is what the
    resonance-continuity checks exercise).
    """
    om = np.atleast_1d(np.asarray(omega, dtype=float))
    if check_resonance:
        for w in om:
            _check_resonance(float(w), params)
    n = params.n
    j, wj2, cos2 = _mode_tables(params)
    base = 1.0 / ((n + 1) * (params.omega0**2 - om**2))
    even = np.zeros_like(om)
    odd = np.zeros_like(om)
    w_even = 2.0 / (n + 1) * cos2[j % 2 == 0]
    w_odd = 2.0 / (n + 1) * cos2[j % 2 == 1]
    d_even = wj2[j[j % 2 == 0]]
    d_odd = wj2[j[j % 2 == 1]]
    # Chunk the omega grid so the (k, n) denominator matrix stays small.
    step = max(1, int(2**22 / max(n, 1)))
    for lo in range(0, om.size, step):
        sl = slice(lo, lo + step)
        even[sl] = (w_even / (d_even[None, :] - om[sl, None] ** 2)).sum(axis=1)
        odd[sl] = (w_odd / (d_odd[None, :] - om[sl, None] ** 2)).sum(axis=1)
    e = base + even
    g0 = e + odd
    g1 = e - odd
    return EndpointGreens(omega=om, g0=g0, g1=g1, sq_diff=4.0 * e * odd)


def green(x: int, y: int, omega: float, params: ChainParams) -> float:
    """Single entry G_{x,y}(omega, n) by direct mode summation."""
    n = params.n
    if not (0 <= x <= n and 0 <= y <= n):
        raise ValueError(f"sites must lie in 0..{n}, got x={x}, y={y}")
    _check_resonance(omega, params)
    j, wj2, _ = _mode_tables(params)
    N = n + 1
    cx = np.cos(np.pi * j * (2 * x + 1) / (2.0 * N))
    cy = np.cos(np.pi * j * (2 * y + 1) / (2.0 * N))
    base = 1.0 / (N * (params.omega0**2 - omega**2))
    return float(base + (2.0 / N) * np.sum(cx * cy / (wj2[1:] - omega**2)))


def greens_table(omega: float, params: ChainParams) -> GreensTable:
    """Endpoint rows G_{0,x} and G_{x,n} for all sites at one frequency.

    Direct O(n^2) summation (chunked); exact up to roundoff at desk scale
    (n <= 4096).
    """
    _check_resonance(omega, params)
    n = params.n
    N = n + 1
    j, wj2, cos2 = _mode_tables(params)
    base = 1.0 / (N * (params.omega0**2 - omega**2))
    cosj = np.cos(np.pi * j / (2.0 * N))
    w0 = (2.0 / N) * cosj / (wj2[1:] - omega**2)
    w1 = w0 * (-1.0) ** j
    g0_site = np.empty(N)
    g1_site = np.empty(N)
    step = max(1, int(2**22 / N))
    for lo in range(0, N, step):
        x = np.arange(lo, min(lo + step, N))
        c = np.cos(np.pi * np.outer(2 * x + 1, j) / (2.0 * N))
        g0_site[lo : lo + step] = base + c @ w0
        g1_site[lo : lo + step] = base + c @ w1
    ends = endpoint_greens(omega, params, check_resonance=False)
    return GreensTable(
        omega=float(omega),
        n=n,
        g0_site=g0_site,
        g1_site=g1_site,
        g0=float(ends.g0[0]),
        g1=float(ends.g1[0]),
        sq_diff=float(ends.sq_diff[0]),
    )


def endpoint_derivatives(omega: float, params: ChainParams) -> tuple[float, float, float, float]:
    """d/d(omega^2) of the endpoint functions and of their gradient analogues.

    Returns (I0, I1, J0, J1) with

        I_s = d G^s / d omega^2
            = 1/((n+1)(omega0^2-omega^2)^2)
              + 2/(n+1) sum_j (-1)^{js} cos^2(pi j/(2(n+1))) / (omega_j^2-omega^2)^2,
        J_s = 2/(n+1) sum_j (-1)^{js} sin^2(pi j/(n+1)) / (omega_j^2-omega^2)^2.

    I_s arises from sums of products of site values, J_s from sums of
    products of their discrete gradients (the Dirichlet form of -Delta_N
    contributes the eigenvalue factor 4 sin^2 = omega_j^2 - omega0^2).
    """
    _check_resonance(omega, params)
    n = params.n
    j, wj2, cos2 = _mode_tables(params)
    den2 = (wj2[1:] - omega**2) ** 2
    sin2 = np.sin(np.pi * j / (n + 1)) ** 2
    base = 1.0 / ((n + 1) * (params.omega0**2 - omega**2) ** 2)
    sgn = (-1.0) ** j
    pref = 2.0 / (n + 1)
    i0 = base + pref * np.sum(cos2 / den2)
    i1 = base + pref * np.sum(sgn * cos2 / den2)
    j0 = pref * np.sum(sin2 / den2)
    j1 = pref * np.sum(sgn * sin2 / den2)
    return float(i0), float(i1), float(j0), float(j1)


def regularized_endpoints(j: int, params: ChainParams) -> tuple[float, float, float]:
    """Pole-subtracted endpoint sums at omega = omega_j and their combination S.

    The j-th summand is omitted (for j = 0 the base term is the pole) and
    the rest is evaluated exactly at omega_j.  Returns (Gbar0, Gbar1, S)
    with S = Gbar0 - (-1)^j Gbar1, the quantity entering the finite
    resonant work.
    """
    n = params.n
    if not 0 <= j <= n:
        raise ValueError(f"mode index must lie in 0..{n}, got {j}")
    wj2 = spectrum(params) ** 2
    om2 = wj2[j]
    k = np.arange(1, n + 1)
    cos2 = np.cos(np.pi * k / (2.0 * (n + 1))) ** 2
    keep = k != j
    terms = (2.0 / (n + 1)) * cos2[keep] / (wj2[k[keep]] - om2)
    sgn = (-1.0) ** k[keep]
    gbar0 = float(np.sum(terms))
    gbar1 = float(np.sum(sgn * terms))
    if j != 0:
        base = 1.0 / ((n + 1) * (params.omega0**2 - om2))
        gbar0 += base
        gbar1 += base
    s = gbar0 - (-1.0) ** j * gbar1
    return gbar0, gbar1, float(s)


def pole_coefficient(j: int, s: int, params: ChainParams) -> float:
    """Coefficient of 1/(omega^2 - omega_j^2) in G^s near mode j."""
    n = params.n
    if j == 0:
        return -1.0 / (n + 1)
    return -2.0 * (-1.0) ** (j * s) * np.cos(np.pi * j / (2.0 * (n + 1))) ** 2 / (n + 1)


def infinite_green(x: int, omega: float, omega0: float) -> float:
    """Green's function Gamma_x(omega) of the full-lattice operator -Delta + omega0^2 - omega^2.

    Defined for omega strictly outside the band; decays geometrically in
    |x| with a sign-alternating branch above the band.  Exactly on a band
    edge both branch formulas are singular and a domain error is raised.
    """
    lo, hi = band_edges(omega0)
    if lo <= omega <= hi:
        raise ValueError(f"omega={omega!r} must be strictly outside the band [{lo}, {hi}]")
    alpha = omega0**2 - omega**2
    beta = alpha + 4.0
    prod = alpha * beta
    s = 1.0 if alpha > 0 else -1.0
    lam = 1.0 + alpha / 2.0 + s * np.sqrt(prod) / 2.0
    return float(s / np.sqrt(prod) * lam ** (-abs(int(x))))


def full_green_matrix(omega: float, params: ChainParams) -> np.ndarray:
    """Dense (n+1)x(n+1) Green's matrix via the spectral expansion (test scale)."""
    _check_resonance(omega, params)
    n = params.n
    N = n + 1
    wj2 = spectrum(params) ** 2
    x = np.arange(N)
    phi = np.empty((N, N))
    phi[:, 0] = 1.0 / np.sqrt(N)
    jj = np.arange(1, N)
    phi[:, 1:] = np.sqrt(2.0 / N) * np.cos(np.pi * np.outer(2 * x + 1, jj) / (2.0 * N))
    return (phi / (wj2 - omega**2)) @ phi.T
