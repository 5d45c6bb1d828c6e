"""Exception and warning types shared across the package."""


class TruncationError(ValueError):
    """Fock-space truncation leaves too much tail probability.

    Carries ``suggested_n_max``, the smallest truncation index that would
    bring the tail mass below the tolerance.
    """

    def __init__(self, message, suggested_n_max=None):
        super().__init__(message)
        self.suggested_n_max = suggested_n_max


class OverdampedError(ValueError):
    """Decay rate >= oscillation frequency; outside the weak-coupling regime."""


class UnsupportedInitialStateError(ValueError):
    """Initial condition outside the solved sector of the block equations."""


class InsufficientDataError(ValueError):
    """Signal too short or too featureless for the requested estimate."""


class IntegrationError(RuntimeError):
    """Adaptive ODE integration failed to reach the end of the time grid."""


class ValidityWarning(UserWarning):
    """A modeling assumption (weak coupling, Lamb-Dicke, large detuning) is strained."""
