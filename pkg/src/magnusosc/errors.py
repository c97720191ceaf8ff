"""Exception and warning types used across the package."""


class MagnusOscError(Exception):
    """Base class for all package-specific errors."""


class InvalidProfileError(MagnusOscError):
    """A drive profile violates its construction contract."""


class QuadratureError(MagnusOscError):
    """Adaptive quadrature failed to reach the requested accuracy.

    Carries the best value obtained and the achieved error estimate so
    callers can decide whether the partial result is still usable.
    """

    def __init__(self, message, value=None, error_estimate=None):
        super().__init__(message)
        self.value = value
        self.error_estimate = error_estimate


class StiffnessError(MagnusOscError):
    """The adaptive integrator underflowed its step size or step budget."""


class ConsistencyError(MagnusOscError):
    """An internal invariant (unimodularity, dual-route agreement) failed."""


class InconsistentPropagatorError(MagnusOscError):
    """A propagator violates the Bogoliubov unitarity identity."""


class SingularPropagatorError(MagnusOscError):
    """The (2,2) element of the interaction propagator vanished (caustic)."""


class DegeneratePairError(MagnusOscError):
    """The closed-time-path log argument vanished for a profile pair."""


class ConfigError(MagnusOscError):
    """A run configuration could not be parsed or validated.

    ``line`` is the 1-based line number in the config file when known,
    ``field`` the dotted key name.
    """

    def __init__(self, message, line=None, field=None):
        parts = []
        if line is not None:
            parts.append(f"line {line}")
        if field is not None:
            parts.append(f"field '{field}'")
        prefix = " (".join([", ".join(parts)]) + ") " if parts else ""
        super().__init__((f"[{', '.join(parts)}] " if parts else "") + message)
        self.line = line
        self.field = field


class DiscretizationWarning(UserWarning):
    """A finite-difference probe's bump/step sizes are mismatched."""
