"""Periodic steady state of a pinned harmonic chain with boundary forcing and thermostats.

The library computes the exact time-periodic response, injected work,
mechanical/thermal energy, and energy currents of n+1 coupled oscillators
driven by a periodic force at one end and damped by Langevin thermostats at
both ends, together with all large-n limits, and cross-validates every
closed form against independent oracles (direct linear solve, periodic
quadrature, stationary covariance solve, exact stochastic stepping).
"""

from .chain_core import (
    Band,
    BandLocation,
    ChainParams,
    ForceSpec,
    band_edges,
    classify,
    dispersion,
    inverse_dispersion,
    nearest_mode,
    resonance_tolerance,
    spectrum,
)
from .errors import (
    ChainworkError,
    ConfigError,
    NumericalError,
    PoleError,
    ResonanceError,
    SingularSystemError,
    SolveError,
)
from .greens import (
    EndpointGreens,
    GreensTable,
    endpoint_derivatives,
    endpoint_greens,
    full_green_matrix,
    green,
    greens_table,
    infinite_green,
    pole_coefficient,
    regularized_endpoints,
)
from .response import (
    ResponseAmplitudes,
    amplitudes_via_greens,
    amplitudes_via_solve,
    multimode_amplitudes,
    periodic_means,
    superposed_means,
)
from .observables import (
    EnergyReport,
    ThermalState,
    WorkGrid,
    WorkReport,
    mech_currents,
    mech_energy,
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
from .asymptotics import (
    ScalingPoint,
    YoungHistogram,
    limit_energy_outside,
    limit_green_outside,
    limit_work_band_edges,
    limit_work_outside,
    mean_scaled_work,
    outside_band_derivatives,
    scaled_work_values,
    scaling_point,
    window_average_work,
    young_histogram,
)
from .simulate import (
    CurrentCheckReport,
    SimConfig,
    StepOperator,
    TrajectoryStats,
    exact_step_operator,
    run,
    steady_current_check,
)

__version__ = "0.1.0"
