"""Exception types shared across the package."""


class ChainworkError(Exception):
    """Base class for all package-specific failures."""


class ResonanceError(ChainworkError):
    """Requested frequency is within the resonance tolerance of a chain mode.

    The bare Green's functions diverge there; callers must switch to the
    pole-cancelled resonant path.
    """

    def __init__(self, omega: float, mode_index: int):
        self.omega = omega
        self.mode_index = mode_index
        super().__init__(
            f"omega={omega!r} is within resonance tolerance of mode j={mode_index}; "
            "use the regularized/resonant evaluation instead"
        )


class SingularSystemError(ChainworkError):
    """The undamped response system is singular (forcing exactly on a mode)."""


class ConfigError(ChainworkError):
    """Physically inconsistent configuration (e.g. no damping anywhere)."""


class SolveError(ChainworkError):
    """A linear-algebra solve failed to reach the required residual."""


class NumericalError(ChainworkError):
    """An internal numerical consistency check failed."""


class PoleError(ChainworkError):
    """Scaling-function evaluation requested too close to a pole in u."""
