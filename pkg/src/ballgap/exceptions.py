"""Exception hierarchy for ballgap."""


class BallgapError(Exception):
    """Base class for all errors raised by this package."""


class DegenerateFacet(BallgapError, ValueError):
    pass


class OutOfRange(BallgapError, ValueError):
    pass


class TooFewPoints(BallgapError, ValueError):
    pass


class DegenerateInput(BallgapError, ValueError):
    pass


class NumericalFailure(BallgapError, RuntimeError):
    pass


class OriginNotInterior(BallgapError, ValueError):
    pass


class PoolTooSmall(BallgapError, ValueError):
    pass


class PreconditionViolated(BallgapError, ValueError):
    pass


class RegimeViolation(BallgapError, UserWarning):
    """Issued (as a warning) when an audit runs outside the vertex-count regime
    of the lower-bound argument."""
