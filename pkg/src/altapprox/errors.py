"""Exception types shared across the package."""


class ConsistencyError(RuntimeError):
    """An exact identity that must hold by construction was violated.

    Raised on internal bugs (e.g. a division by ``x`` leaving a remainder),
    never on bad user input.
    """


class QuadratureError(ArithmeticError):
    """Adaptive quadrature failed to meet its tolerance within budget."""

    def __init__(self, message, estimates=()):
        super().__init__(message)
        self.estimates = tuple(estimates)


class RootFindingError(ArithmeticError):
    """A root search did not converge or found the wrong number of roots."""


class SampleTableError(ValueError):
    """A sample table does not cover the abscissas an operator needs."""

    def __init__(self, message, missing=()):
        super().__init__(message)
        self.missing = tuple(missing)
