"""Dense matrices of the chain's linear dynamics (shared internal helpers).

State ordering for phase-space matrices is (q_0..q_n, p_0..p_n).  The
equations of motion are dq/dt = p, dp/dt = -V q - Gamma p + forcing + noise,
with V the pinned Neumann operator and Gamma the endpoint damping 2*gamma.
"""

from __future__ import annotations

import numpy as np

from .chain_core import ChainParams


def neumann_laplacian(sites: int) -> np.ndarray:
    """Discrete Laplacian with reflecting boundary rows f1-f0 and f_{n-1}-f_n."""
    lap = np.zeros((sites, sites))
    idx = np.arange(sites)
    lap[idx, idx] = -2.0
    lap[idx[:-1], idx[:-1] + 1] = 1.0
    lap[idx[1:], idx[1:] - 1] = 1.0
    lap[0, 0] = -1.0
    lap[-1, -1] = -1.0
    return lap


def pinned_operator(params: ChainParams) -> np.ndarray:
    """V = -Delta_N + omega0^2."""
    m = params.sites
    return -neumann_laplacian(m) + params.omega0**2 * np.eye(m)


def damping_matrix(params: ChainParams) -> np.ndarray:
    """Diagonal damping 2*gamma at the two endpoint momenta."""
    m = params.sites
    g = np.zeros((m, m))
    g[0, 0] = 2.0 * params.gamma_minus
    g[-1, -1] = 2.0 * params.gamma_plus
    return g


def drift_matrix(params: ChainParams) -> np.ndarray:
    """Generator M of the noise-free flow d/dt (q, p) = M (q, p)."""
    m = params.sites
    return np.block(
        [
            [np.zeros((m, m)), np.eye(m)],
            [-pinned_operator(params), -damping_matrix(params)],
        ]
    )


def noise_covariance(params: ChainParams) -> np.ndarray:
    """Diffusion matrix Q = B B^T: 4*gamma*T on the endpoint momenta."""
    m = params.sites
    q = np.zeros((2 * m, 2 * m))
    q[m, m] = 4.0 * params.gamma_minus * params.T_minus
    q[-1, -1] = 4.0 * params.gamma_plus * params.T_plus
    return q


def force_direction(params: ChainParams) -> np.ndarray:
    """Unit phase-space vector along the driven momentum p_n."""
    e = np.zeros(2 * params.sites)
    e[-1] = 1.0
    return e
