"""Exception types shared across the package."""


class ChshError(Exception):
    """Base class for everything raised on purpose by this package."""


class InvalidArgumentError(ChshError, ValueError):
    """An argument is outside the supported domain."""


class DimensionMismatchError(ChshError, ValueError):
    """Operands live in truncated spaces of different dimension."""


class DegenerateStateError(ChshError, ValueError):
    """The requested state is (numerically) a null vector: its normalization
    denominator is below the degeneracy threshold."""


class IncompatibleSetupError(ChshError, ValueError):
    """The measurement setup cannot be paired with the given state family."""


class SeriesTruncationError(ChshError, RuntimeError):
    """A correlator series did not converge within the allowed pair indices."""

    def __init__(self, message: str, residual_bound: float):
        super().__init__(message)
        self.residual_bound = residual_bound
