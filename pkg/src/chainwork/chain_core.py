"""Chain parameters, dispersion relation, finite-chain spectrum, band bookkeeping.

The chain has n+1 sites on the lattice interval {0, ..., n}, an on-site
pinning frequency omega0, Langevin thermostats of strength gamma_-/gamma_+
and temperature T_-/T_+ at the two endpoints, and a periodic force applied
at site n.  All frequencies are angular (rad per unit time); the force
period is theta = 2*pi/omega.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

import numpy as np

__all__ = [
    "ChainParams",
    "ForceSpec",
    "Band",
    "BandLocation",
    "dispersion",
    "inverse_dispersion",
    "spectrum",
    "classify",
    "nearest_mode",
    "resonance_tolerance",
    "band_edges",
]


@dataclass(frozen=True)
class ChainParams:
    """Physical parameters of the pinned, boundary-thermostatted chain.

    n is the chain index: there are n+1 oscillators.  The two thermostatted
    endpoints must be distinct sites, so n >= 1.
    """

    n: int
    omega0: float
    gamma_minus: float
    gamma_plus: float
    T_minus: float = 0.0
    T_plus: float = 0.0

    def __post_init__(self):
        if not isinstance(self.n, (int, np.integer)) or self.n < 1:
            raise ValueError(f"n must be an integer >= 1, got {self.n!r}")
        for name in ("omega0", "gamma_minus", "gamma_plus", "T_minus", "T_plus"):
            v = getattr(self, name)
            if not math.isfinite(v):
                raise ValueError(f"{name} must be finite, got {v!r}")
            if v < 0:
                raise ValueError(f"{name} must be >= 0, got {v!r}")

    @property
    def sites(self) -> int:
        return self.n + 1

    @property
    def total_damping(self) -> float:
        return self.gamma_minus + self.gamma_plus


@dataclass(frozen=True)
class ForceSpec:
    """Periodic boundary force sum_l F_l cos(l*omega*t) acting on site n.

    modes is a sequence of (l, F_l) pairs with distinct integer harmonics
    l >= 1.  The fundamental angular frequency omega = 2*pi/theta must be
    positive.
    """

    omega_fundamental: float
    modes: tuple[tuple[int, float], ...]

    def __post_init__(self):
        if not (math.isfinite(self.omega_fundamental) and self.omega_fundamental > 0):
            raise ValueError(f"omega_fundamental must be > 0, got {self.omega_fundamental!r}")
        norm = tuple((int(ell), float(amp)) for ell, amp in self.modes)
        seen = set()
        for ell, amp in norm:
            if ell < 1:
                raise ValueError(f"mode index must be >= 1, got {ell}")
            if ell in seen:
                raise ValueError(f"duplicate mode index {ell}; combine amplitudes first")
            if not math.isfinite(amp):
                raise ValueError(f"mode amplitude must be finite, got {amp!r}")
            seen.add(ell)
        object.__setattr__(self, "modes", norm)

    @classmethod
    def single(cls, omega: float, amplitude: float) -> "ForceSpec":
        """A one-mode cosine force F*cos(omega*t)."""
        return cls(omega_fundamental=omega, modes=((1, amplitude),))

    @property
    def period(self) -> float:
        return 2.0 * math.pi / self.omega_fundamental

    @property
    def max_harmonic(self) -> int:
        return max((ell for ell, _ in self.modes), default=1)

    def frequencies(self) -> list[float]:
        return [ell * self.omega_fundamental for ell, _ in self.modes]

    def values(self, t: np.ndarray | float) -> np.ndarray | float:
        """Force value F(t/theta) at time(s) t."""
        t = np.asarray(t, dtype=float)
        out = np.zeros_like(t)
        for ell, amp in self.modes:
            out = out + amp * np.cos(ell * self.omega_fundamental * t)
        return out


class Band(enum.Enum):
    BELOW = "below_band"
    IN = "in_band"
    ABOVE = "above_band"
    RESONANCE = "resonance"


@dataclass(frozen=True)
class BandLocation:
    """Where a driving frequency sits relative to the phonon band.

    For in-band frequencies `r` holds the normalized wavenumber r(omega);
    for finite-chain resonances `j` holds the resonant mode index.
    """

    band: Band
    j: int | None = None
    r: float | None = None

    @property
    def is_resonant(self) -> bool:
        return self.band is Band.RESONANCE

    def tag(self) -> str:
        if self.band is Band.RESONANCE:
            return f"resonance_{self.j}"
        return self.band.value


def dispersion(r: float | np.ndarray, omega0: float) -> float | np.ndarray:
    """Infinite-chain dispersion omega(r) = sqrt(omega0^2 + 4 sin^2(pi r / 2)).

    r is the normalized wavenumber in [0, 1]; the range of omega(r) is the
    phonon band [omega0, sqrt(omega0^2 + 4)].
    """
    r = np.asarray(r, dtype=float)
    if np.any(r < 0) or np.any(r > 1):
        raise ValueError("normalized wavenumber r must lie in [0, 1]")
    out = np.sqrt(omega0**2 + 4.0 * np.sin(np.pi * r / 2.0) ** 2)
    return float(out) if out.ndim == 0 else out


def inverse_dispersion(omega: float, omega0: float) -> float:
    """Inverse of the dispersion relation, r(omega) = (2/pi) asin(sqrt(omega^2-omega0^2)/2)."""
    lo, hi = band_edges(omega0)
    if not (lo <= omega <= hi):
        raise ValueError(f"omega={omega!r} outside the band [{lo}, {hi}]")
    arg = 0.5 * math.sqrt(max(omega * omega - omega0 * omega0, 0.0))
    return (2.0 / math.pi) * math.asin(min(arg, 1.0))


def band_edges(omega0: float) -> tuple[float, float]:
    """The phonon band [omega0, sqrt(omega0^2 + 4)] of the infinite chain."""
    return omega0, math.sqrt(omega0 * omega0 + 4.0)


def spectrum(params: ChainParams) -> np.ndarray:
    """Normal-mode frequencies omega_j = omega(j/(n+1)), j = 0..n, increasing."""
    j = np.arange(params.n + 1)
    return dispersion(j / (params.n + 1), params.omega0)


def resonance_tolerance(omega_j_sq: float | np.ndarray) -> float | np.ndarray:
    """Half-width in omega^2 below which a frequency counts as resonant.

    Relative scale 1e-9 on max(1, omega_j^2): inside this window both the
    numerator and denominator of the work formula blow up like 1/eps^2 and
    the pole-cancelled path must be used.
    """
    return 1e-9 * np.maximum(1.0, omega_j_sq)


def nearest_mode(omega: float, params: ChainParams) -> tuple[int, float]:
    """Mode index j minimizing |omega_j^2 - omega^2| and that distance."""
    wj2 = spectrum(params) ** 2
    d = np.abs(wj2 - omega * omega)
    j = int(np.argmin(d))
    return j, float(d[j])


def classify(omega: float, params: ChainParams) -> BandLocation:
    """Band location of a driving frequency, resonance taking priority.

    A frequency within resonance_tolerance of some omega_j^2 is classified
    OnFiniteResonance even when it also lies strictly inside the band.  The
    band comparison itself is strict; the upper band edge (never a finite-n
    mode) is classified as above-band.
    """
    if not (math.isfinite(omega) and omega > 0):
        raise ValueError(f"omega must be > 0, got {omega!r}")
    j, dist = nearest_mode(omega, params)
    wj2 = dispersion(j / (params.n + 1), params.omega0) ** 2
    if dist < resonance_tolerance(wj2):
        return BandLocation(Band.RESONANCE, j=j)
    lo, hi = band_edges(params.omega0)
    if lo < omega < hi:
        return BandLocation(Band.IN, r=inverse_dispersion(omega, params.omega0))
    if omega <= lo:
        return BandLocation(Band.BELOW)
    return BandLocation(Band.ABOVE)
