"""Stochastic integration of the driven, thermostatted chain.

The dynamics are linear with additive Gaussian noise, so the transition
over one step of length dt is exactly Gaussian:

    z(t+dt) = P z(t) + m(t, t+dt) + L xi,     xi ~ N(0, Id),

with P = exp(M dt) the flow of the drift M, m the exact integral of the
periodic forcing against the flow (closed form per harmonic through the
resolvent (M - i l omega)^{-1}), and L L^T the exact step noise covariance
obtained from an augmented-block matrix exponential.  The default "exact"
stepper therefore has no time-discretization bias at the sample times; an
Euler-Maruyama stepper is kept behind method="euler" for cross-checking.
Beware that the explicit Euler scheme amplifies each oscillatory mode by
sqrt(1 + (omega_j dt)^2) per step and interior modes of a long chain are
only weakly damped, so the euler mode needs dt * omega_j^2 / 2 below the
slowest damping rate to be stable; the exact stepper has no restriction.

Randomness comes from the counter-based Philox (4x64) generator keyed by
(seed, trajectory index): trajectories are independent streams that can be
integrated in any order, and a fixed (seed, trajectory, step) triple always
addresses the same Gaussian increment.  Statistics reduce over fixed-shape
arrays in period order, so identical configurations reproduce results
bit-for-bit.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.linalg import expm

from . import _system
from .chain_core import ChainParams, ForceSpec
from .errors import NumericalError, SingularSystemError

__all__ = [
    "SimConfig",
    "TrajectoryStats",
    "CurrentCheckReport",
    "StepOperator",
    "exact_step_operator",
    "run",
    "steady_current_check",
]


@dataclass(frozen=True)
class SimConfig:
    """One simulation request.

    dt must divide the force period evenly with an integer number of
    samples per period >= 32, so that phase-locked averaging bins line up
    across periods.
    """

    params: ChainParams
    force: ForceSpec
    dt: float
    burn_in_periods: int
    measure_periods: int
    seed: int
    trajectories: int = 1
    method: str = "exact"
    batch_periods: int = 1

    def __post_init__(self):
        spp = self.force.period / self.dt
        if abs(spp - round(spp)) > 1e-9 * spp or round(spp) < 32:
            raise ValueError(
                f"dt must divide the period into an integer >= 32 samples, got {spp!r}"
            )
        if self.measure_periods < 1:
            raise ValueError("measure_periods must be >= 1")
        if self.burn_in_periods < 0:
            raise ValueError("burn_in_periods must be >= 0")
        if self.trajectories < 1:
            raise ValueError("trajectories must be >= 1")
        if self.method not in ("exact", "euler"):
            raise ValueError(f"unknown stepping method {self.method!r}")
        # Batches group consecutive periods so the stderr stays honest when
        # the observable autocorrelation time exceeds one period.
        if self.batch_periods < 1 or self.measure_periods % self.batch_periods:
            raise ValueError("batch_periods must divide measure_periods")

    @classmethod
    def from_samples(
        cls,
        params: ChainParams,
        force: ForceSpec,
        samples_per_period: int = 32,
        burn_in_periods: int = 200,
        measure_periods: int = 2000,
        seed: int = 0,
        trajectories: int = 1,
        method: str = "exact",
        batch_periods: int = 1,
    ) -> "SimConfig":
        return cls(
            params=params,
            force=force,
            dt=force.period / samples_per_period,
            burn_in_periods=burn_in_periods,
            measure_periods=measure_periods,
            seed=seed,
            trajectories=trajectories,
            method=method,
            batch_periods=batch_periods,
        )

    @property
    def samples_per_period(self) -> int:
        return round(self.force.period / self.dt)


@dataclass(frozen=True)
class TrajectoryStats:
    """Batch-mean estimates (batches = measured periods x trajectories).

    Phase-locked arrays are indexed by the within-period sample s, which
    sits at time (s+1)*dt modulo the period; compare against reconstructed
    means evaluated on that grid.
    """

    mean_work: float
    work_stderr: float
    mean_J_left: float
    J_left_stderr: float
    mean_J_right: float
    J_right_stderr: float
    temp_profile: np.ndarray
    temp_stderr: np.ndarray
    mean_q: np.ndarray  # (samples_per_period, n+1) phase-locked means
    mean_p: np.ndarray
    mean_q_stderr: np.ndarray
    mean_p_stderr: np.ndarray
    batches: int


@dataclass(frozen=True)
class CurrentCheckReport:
    """Bulk-current stationarity check of an (typically force-free) run."""

    bond_currents: np.ndarray
    bond_stderr: np.ndarray
    closed_form: float  # c(gamma, omega0) (T_- - T_+); NaN unless gamma_- = gamma_+
    x_independent: bool
    matches_closed: bool


class StepOperator:
    """Precomputed one-step transition of the chain's linear SDE."""

    def __init__(self, params: ChainParams, force: ForceSpec, dt: float, method: str = "exact"):
        if dt <= 0:
            raise ValueError("dt must be > 0")
        self.params = params
        self.force = force
        self.dt = float(dt)
        self.method = method
        m = 2 * params.sites
        self.dim = m
        drift = _system.drift_matrix(params)
        q_noise = _system.noise_covariance(params)
        e_force = _system.force_direction(params)
        if method == "exact":
            # Augmented-block exponential gives the propagator and the exact
            # step covariance Sigma = int_0^dt exp(M s) Q exp(M^T s) ds in one go.
            block = np.zeros((2 * m, 2 * m))
            block[:m, :m] = -drift
            block[:m, m:] = q_noise
            block[m:, m:] = drift.T
            eb = expm(block * self.dt)
            self.propagator = eb[m:, m:].T
            cov = self.propagator @ eb[:m, m:]
            cov = 0.5 * (cov + cov.T)
            evals, evecs = np.linalg.eigh(cov)
            floor = -1e-12 * max(1.0, float(evals[-1]))
            if float(evals[0]) < floor:
                raise NumericalError(
                    f"step covariance eigenvalue {evals[0]:.3e} below the roundoff floor"
                )
            self.noise_factor = evecs * np.sqrt(np.clip(evals, 0.0, None))
            self.step_covariance = cov
            self.forced_vectors = []
            ident = np.eye(m)
            for ell, amp in force.modes:
                w = ell * force.omega_fundamental
                if params.total_damping == 0.0:
                    from .chain_core import nearest_mode, resonance_tolerance, spectrum

                    j, dist = nearest_mode(w, params)
                    if dist < resonance_tolerance(spectrum(params)[j] ** 2):
                        raise SingularSystemError(
                            f"undamped forcing on mode j={j} (harmonic l={ell}): "
                            "no bounded periodic response"
                        )
                shifted = drift - 1j * w * ident
                phi = np.linalg.solve(shifted, self.propagator * np.exp(-1j * w * self.dt) - ident)
                self.forced_vectors.append((w, amp, phi @ e_force.astype(complex)))
        else:
            self.drift = drift
            self.noise_std = np.sqrt(np.diag(q_noise))
            self.e_force = e_force

    def deterministic_increment(self, t_end: float) -> np.ndarray:
        """Exact forcing contribution over the step ending at t_end."""
        out = np.zeros(self.dim)
        for w, amp, vec in self.forced_vectors:
            out += amp * np.real(np.exp(1j * w * t_end) * vec)
        return out

    def step(self, state: np.ndarray, t_end: float, rng: np.random.Generator) -> np.ndarray:
        if self.method == "exact":
            out = self.propagator @ state
            if self.forced_vectors:
                out += self.deterministic_increment(t_end)
            return out + self.noise_factor @ rng.standard_normal(self.dim)
        t0 = t_end - self.dt
        drift_part = self.drift @ state + self.force.values(t0) * self.e_force
        noise = self.noise_std * rng.standard_normal(self.dim)
        return state + self.dt * drift_part + math.sqrt(self.dt) * noise


def exact_step_operator(params: ChainParams, force: ForceSpec, dt: float) -> StepOperator:
    """Exact-in-distribution one-step transition (propagator, forcing, noise)."""
    return StepOperator(params, force, dt, method="exact")


def _trajectory_rng(seed: int, trajectory: int) -> np.random.Generator:
    return np.random.Generator(np.random.Philox(key=np.array([seed, trajectory], dtype=np.uint64)))


def _integrate(config: SimConfig, trajectory: int) -> tuple[np.ndarray, np.ndarray]:
    """One trajectory; returns measured (q, p) sampled as (periods, spp, sites)."""
    params, force = config.params, config.force
    op = StepOperator(params, force, config.dt, config.method)
    rng = _trajectory_rng(config.seed, trajectory)
    m = params.sites
    spp = config.samples_per_period
    state = np.zeros(op.dim)
    k = 0
    for _ in range(config.burn_in_periods * spp):
        k += 1
        state = op.step(state, k * config.dt, rng)
    qs = np.empty((config.measure_periods, spp, m))
    ps = np.empty((config.measure_periods, spp, m))
    for per in range(config.measure_periods):
        for s in range(spp):
            k += 1
            state = op.step(state, k * config.dt, rng)
            qs[per, s] = state[:m]
            ps[per, s] = state[m:]
    return qs, ps


def _batch_stats(batch_values: np.ndarray) -> tuple[float, float]:
    b = batch_values.shape[0]
    mean = float(np.mean(batch_values))
    if b < 2:
        return mean, math.nan
    return mean, float(np.std(batch_values, ddof=1) / math.sqrt(b))


def run(config: SimConfig) -> TrajectoryStats:
    """Integrate burn-in plus measurement and estimate steady-state statistics.

    Work is the batch mean of F(t/theta) p_n(t) over each measured period
    (the sample mean is the exact period average for trigonometric phase
    dependence at >= 32 samples/period).  Boundary currents follow the
    stochastic flux expressions 2 gamma_-(T_- - p_0^2) and
    -2 gamma_+(T_+ - p_n^2) - F p_n.  Temperatures are variances of the
    momentum fluctuation around the phase-locked mean.
    """
    spp = config.samples_per_period
    m = config.params.sites
    qs = []
    ps = []
    for tr in range(config.trajectories):
        q, p = _integrate(config, tr)
        qs.append(q)
        ps.append(p)
    q = np.concatenate(qs, axis=0)  # (periods_total, spp, m)
    p = np.concatenate(ps, axis=0)
    bp = config.batch_periods
    batches = q.shape[0] // bp
    qb = q.reshape(batches, bp * spp, m)  # consecutive periods grouped per batch
    pb = p.reshape(batches, bp * spp, m)

    t_phase = (np.arange(spp) + 1) * config.dt  # sample s of a period sits at phase (s+1) dt
    f_vals = np.asarray(config.force.values(t_phase))
    f_tiled = np.tile(f_vals, bp)

    work_batches = np.mean(f_tiled[None, :] * pb[:, :, -1], axis=1)
    mean_work, work_stderr = _batch_stats(work_batches)

    gm, gp = config.params.gamma_minus, config.params.gamma_plus
    Tm, Tp = config.params.T_minus, config.params.T_plus
    jl_batches = 2.0 * gm * (Tm - np.mean(pb[:, :, 0] ** 2, axis=1))
    jr_batches = -2.0 * gp * (Tp - np.mean(pb[:, :, -1] ** 2, axis=1)) - work_batches
    mean_jl, jl_stderr = _batch_stats(jl_batches)
    mean_jr, jr_stderr = _batch_stats(jr_batches)

    # Phase-locked means: per-batch phase profiles, mean and spread over batches.
    q_phase_batches = q.reshape(batches, bp, spp, m).mean(axis=1)
    p_phase_batches = p.reshape(batches, bp, spp, m).mean(axis=1)
    mean_q = np.mean(q_phase_batches, axis=0)
    mean_p = np.mean(p_phase_batches, axis=0)
    denom = math.sqrt(batches) if batches > 1 else math.nan
    if batches > 1:
        mean_q_stderr = np.std(q_phase_batches, axis=0, ddof=1) / denom
        mean_p_stderr = np.std(p_phase_batches, axis=0, ddof=1) / denom
    else:
        mean_q_stderr = np.full_like(mean_q, np.nan)
        mean_p_stderr = np.full_like(mean_p, np.nan)

    fluct = p - mean_p[None, :, :]
    temp_batches = np.mean(fluct.reshape(batches, bp * spp, m) ** 2, axis=1)
    temp_profile = np.mean(temp_batches, axis=0)
    temp_stderr = (
        np.std(temp_batches, axis=0, ddof=1) / denom
        if batches > 1
        else np.full(m, np.nan)
    )

    return TrajectoryStats(
        mean_work=mean_work,
        work_stderr=work_stderr,
        mean_J_left=mean_jl,
        J_left_stderr=jl_stderr,
        mean_J_right=mean_jr,
        J_right_stderr=jr_stderr,
        temp_profile=temp_profile,
        temp_stderr=temp_stderr,
        mean_q=mean_q,
        mean_p=mean_p,
        mean_q_stderr=mean_q_stderr,
        mean_p_stderr=mean_p_stderr,
        batches=batches,
    )


def steady_current_check(config: SimConfig) -> CurrentCheckReport:
    """Estimate bulk energy currents <-p_x (q_{x+1} - q_x)> bond by bond.

    Meant for force-free configurations: checks x-independence within 3
    standard errors and, when the two damping strengths are equal, agreement
    with the closed-form conductance c(gamma, omega0) (T_- - T_+).
    """
    from .observables import thermal_current_closed

    qs = []
    ps = []
    for tr in range(config.trajectories):
        q, p = _integrate(config, tr)
        qs.append(q)
        ps.append(p)
    q = np.concatenate(qs, axis=0)
    p = np.concatenate(ps, axis=0)
    bond_samples = -p[:, :, :-1] * (q[:, :, 1:] - q[:, :, :-1])
    bp = config.batch_periods
    b = bond_samples.shape[0] // bp
    bond_batches = np.mean(
        bond_samples.reshape(b, bp * bond_samples.shape[1], bond_samples.shape[2]), axis=1
    )
    bonds = np.mean(bond_batches, axis=0)
    stderr = np.std(bond_batches, axis=0, ddof=1) / math.sqrt(b)

    params = config.params
    if params.gamma_minus == params.gamma_plus and params.gamma_minus > 0:
        closed = thermal_current_closed(params.gamma_minus, params.omega0) * (
            params.T_minus - params.T_plus
        )
    else:
        closed = math.nan
    grand = float(np.mean(bonds))
    x_indep = bool(np.all(np.abs(bonds - grand) <= 3.0 * stderr + 1e-300))
    mid = params.n // 2
    matches = bool(
        not math.isnan(closed) and abs(bonds[mid] - closed) <= 3.0 * stderr[mid] + 1e-300
    )
    return CurrentCheckReport(
        bond_currents=bonds,
        bond_stderr=stderr,
        closed_form=closed,
        x_independent=x_indep,
        matches_closed=matches,
    )
