"""Complex Fourier amplitudes of the periodic steady-state means.

For a one-mode force F cos(omega t) at site n the time-periodic means are

    qbar_x(t) = Re(qtilde_x e^{i omega t}),   pbar_x(t) = Re(ptilde_x e^{i omega t}),

with ptilde_x = i omega qtilde_x.  The amplitudes solve the complex
Neumann-tridiagonal system

    (Delta_N + omega^2 - omega0^2 - 2 i omega gamma_x) qtilde = -F delta_{x,n},

damping gamma_x acting only at x in {0, n}.  Two independent routes are
provided: a closed form in the endpoint Green's functions (production path)
and a direct tridiagonal elimination (reference oracle).

Closed form:  qtilde_x = F (a G^1_x + b G^0_x) with

    a = 1 - 2 i omega gamma_+ Ntilde/Dtilde = (1 + 2 i omega gamma_- G^0)/Dtilde,
    b = -2 i omega gamma_- G^1 / Dtilde,
    Ntilde = G^0 + 2 i omega gamma_- (G^0^2 - G^1^2),
    Dtilde = 1 - 4 gamma_+ gamma_- omega^2 (G^0^2 - G^1^2)
             + 2 i omega (gamma_+ + gamma_-) G^0,

so that qtilde_0 = F G^1/Dtilde and qtilde_n = F Ntilde/Dtilde, and
|Dtilde|^2 equals the real work denominator D(omega, n) identically.
(A common typeset variant attaches a to G^0_x and b to G^1_x; substituting
x = 0, n shows the assignment above is the one consistent with the
endpoint solutions, and the dual-oracle tests pin it.)
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .chain_core import ChainParams, ForceSpec
from .errors import ResonanceError, SingularSystemError
from .greens import greens_table

__all__ = [
    "ResponseAmplitudes",
    "amplitudes_via_greens",
    "amplitudes_via_solve",
    "periodic_means",
    "superposed_means",
    "multimode_amplitudes",
    "response_coefficients",
]


@dataclass(frozen=True)
class ResponseAmplitudes:
    """Fourier amplitudes of the periodic means at one driving frequency.

    a, b, n_tilde, d_tilde are the Green's-function coefficients; they are
    None when the amplitudes were produced by the direct solver at a
    frequency where the bare Green's functions are unavailable (resonance).
    """

    omega: float
    q_tilde: np.ndarray
    p_tilde: np.ndarray
    a: complex | None
    b: complex | None
    n_tilde: complex | None
    d_tilde: complex | None


def response_coefficients(omega: float, params: ChainParams, table=None):
    """(a, b, Ntilde, Dtilde) built from endpoint Green's functions."""
    if table is None:
        table = greens_table(omega, params)
    g0, g1, d2 = table.g0, table.g1, table.sq_diff
    gm, gp = params.gamma_minus, params.gamma_plus
    n_t = g0 + 2j * omega * gm * d2
    d_t = 1.0 - 4.0 * gp * gm * omega**2 * d2 + 2j * omega * (gp + gm) * g0
    a = (1.0 + 2j * omega * gm * g0) / d_t
    b = -2j * omega * gm * g1 / d_t
    return a, b, n_t, d_t


def amplitudes_via_greens(omega: float, F: float, params: ChainParams) -> ResponseAmplitudes:
    """Amplitudes from the endpoint Green's-function closed form."""
    table = greens_table(omega, params)
    a, b, n_t, d_t = response_coefficients(omega, params, table)
    q = F * (a * table.g1_site + b * table.g0_site)
    return ResponseAmplitudes(
        omega=float(omega),
        q_tilde=q,
        p_tilde=1j * omega * q,
        a=complex(a),
        b=complex(b),
        n_tilde=complex(n_t),
        d_tilde=complex(d_t),
    )


def _thomas(diag: np.ndarray, rhs: np.ndarray) -> np.ndarray:
    """Complex tridiagonal elimination with unit off-diagonals, no pivoting.

    The endpoint damping shifts -2 i omega gamma keep the system away from
    singularity except exactly on an undamped resonance; a pivot-magnitude
    guard catches that case.
    """
    m = diag.size
    scale = np.abs(diag).max() + 1.0
    c = np.empty(m - 1, dtype=complex)
    d = np.empty(m, dtype=complex)
    piv = diag[0]
    if abs(piv) < 1e-14 * scale:
        raise SingularSystemError("zero pivot in tridiagonal elimination")
    c[0] = 1.0 / piv
    d[0] = rhs[0] / piv
    for i in range(1, m):
        piv = diag[i] - c[i - 1]
        if abs(piv) < 1e-14 * scale:
            raise SingularSystemError("zero pivot in tridiagonal elimination")
        if i < m - 1:
            c[i] = 1.0 / piv
        d[i] = (rhs[i] - d[i - 1]) / piv
    x = np.empty(m, dtype=complex)
    x[-1] = d[-1]
    for i in range(m - 2, -1, -1):
        x[i] = d[i] - c[i] * x[i + 1]
    return x


def amplitudes_via_solve(omega: float, F: float, params: ChainParams) -> ResponseAmplitudes:
    """Amplitudes from direct tridiagonal elimination (reference oracle).

    Works at any frequency as long as some damping is present; with no
    damping at all, forcing exactly on a mode leaves the system singular.
    """
    m = params.sites
    diag = np.full(m, -2.0 + omega**2 - params.omega0**2, dtype=complex)
    diag[0] = -1.0 + omega**2 - params.omega0**2 - 2j * omega * params.gamma_minus
    diag[-1] = -1.0 + omega**2 - params.omega0**2 - 2j * omega * params.gamma_plus
    rhs = np.zeros(m, dtype=complex)
    rhs[-1] = -F
    q = _thomas(diag, rhs)
    try:
        a, b, n_t, d_t = response_coefficients(omega, params)
        coeffs = (complex(a), complex(b), complex(n_t), complex(d_t))
    except ResonanceError:
        coeffs = (None, None, None, None)
    return ResponseAmplitudes(
        omega=float(omega),
        q_tilde=q,
        p_tilde=1j * omega * q,
        a=coeffs[0],
        b=coeffs[1],
        n_tilde=coeffs[2],
        d_tilde=coeffs[3],
    )


def periodic_means(amps: ResponseAmplitudes, t: float | np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Time-domain means (qbar(t), pbar(t)) reconstructed from one mode.

    For array t the returned arrays have shape t.shape + (n+1,).
    """
    t = np.asarray(t, dtype=float)
    phase = np.exp(1j * amps.omega * t)
    q = np.real(np.multiply.outer(phase, amps.q_tilde))
    p = np.real(np.multiply.outer(phase, amps.p_tilde))
    if t.ndim == 0:
        return q[()], p[()]
    return q, p


def superposed_means(
    modes: list[ResponseAmplitudes], t: float | np.ndarray
) -> tuple[np.ndarray, np.ndarray]:
    """Means of a multimode response: linear superposition over harmonics."""
    t = np.asarray(t, dtype=float)
    q = None
    p = None
    for amps in modes:
        qi, pi = periodic_means(amps, t)
        q = qi if q is None else q + qi
        p = pi if p is None else p + pi
    if q is None:
        raise ValueError("no modes given")
    return q, p


def multimode_amplitudes(
    force: ForceSpec, params: ChainParams, *, method: str = "greens"
) -> list[ResponseAmplitudes]:
    """One ResponseAmplitudes per force harmonic l at frequency l*omega.

    Per-mode failures are re-raised with the offending harmonic attached.
    """
    solver = {"greens": amplitudes_via_greens, "solve": amplitudes_via_solve}[method]
    out = []
    for ell, amp in force.modes:
        w = ell * force.omega_fundamental
        try:
            out.append(solver(w, amp, params))
        except (ResonanceError, SingularSystemError) as exc:
            exc.harmonic = ell  # which force mode failed
            raise
    return out
